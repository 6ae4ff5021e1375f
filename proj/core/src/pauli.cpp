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

#include "lightcone/pauli.hpp"

#include "lightcone/error.hpp"

namespace lightcone {

char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw InputError(std::string("unknown Pauli symbol '") + c + "'");
    }
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, C(0, -1), C(0, 1), 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> s;
    s.reserve(text.size());
    for (char c : text) {
        s.push_back(pauli_from_char(c));
    }
    return PauliString(std::move(s));
}

PauliString PauliString::single(std::size_t n, std::size_t site, Pauli p) {
    if (site >= n) {
        throw InputError("PauliString::single: site " + std::to_string(site) + " out of range");
    }
    PauliString s(n);
    s.set(site, p);
    return s;
}

std::vector<std::size_t> PauliString::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < symbols_.size(); i++) {
        if (symbols_[i] != Pauli::I) {
            out.push_back(i);
        }
    }
    return out;
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (Pauli p : symbols_) {
        w += p != Pauli::I;
    }
    return w;
}

std::string PauliString::str() const {
    std::string s;
    for (Pauli p : symbols_) {
        s += pauli_char(p);
    }
    return s;
}

}  // namespace lightcone
