// Copyright 2026 The Lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIGHTCONE_PAULI_HPP
#define LIGHTCONE_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lightcone {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Single-qubit Pauli matrix.
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// A tensor product of single-site Paulis on n sites. Site 0 is the leftmost
/// tensor factor.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t n) : symbols_(n, Pauli::I) {}
    explicit PauliString(std::vector<Pauli> symbols) : symbols_(std::move(symbols)) {}

    /// Parses strings such as "XIZY" (also accepts '_' for identity).
    static PauliString parse(std::string_view text);
    static PauliString single(std::size_t n, std::size_t site, Pauli p);

    std::size_t size() const { return symbols_.size(); }
    Pauli operator[](std::size_t i) const { return symbols_[i]; }
    void set(std::size_t i, Pauli p) { symbols_[i] = p; }

    std::vector<std::size_t> support() const;
    std::size_t weight() const;
    bool is_identity() const { return weight() == 0; }
    std::string str() const;

    bool operator==(const PauliString&) const = default;

   private:
    std::vector<Pauli> symbols_;
};

}  // namespace lightcone

#endif
