#pragma once

// Hand-written example states and operators in the product basis (m = j..-j ordering).

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"

#include <cmath>

namespace fixture {

using twinobs::BipartiteState;
using twinobs::Dims;
using twinobs::Index;
using twinobs::Matrix;
using twinobs::Vector;

inline Matrix diag(std::initializer_list<double> v) {
    Matrix m = Matrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) m(i, i) = x, ++i;
    return m;
}

inline Matrix sz_half() { return diag({0.5, -0.5}); }
inline Matrix sz_one() { return diag({1.0, 0.0, -1.0}); }

inline Vector ket(Index d, std::initializer_list<std::pair<Index, double>> entries) {
    Vector v = Vector::Zero(d);
    for (auto [i, x] : entries) v(i) = x;
    return v;
}

// Two spin-1/2: |up,down> = 1, |down,up> = 2.
inline Vector triplet0() { return ket(4, {{1, M_SQRT1_2}, {2, M_SQRT1_2}}); }
inline Vector singlet() { return ket(4, {{1, M_SQRT1_2}, {2, -M_SQRT1_2}}); }
inline Vector tripletm1() { return ket(4, {{3, 1.0}}); }
inline Vector tripletp1() { return ket(4, {{0, 1.0}}); }

inline BipartiteState example1(double w = 0.5) {
    return twinobs::mix({{2, 2}, {{w, triplet0()}, {1.0 - w, singlet()}}});
}

inline BipartiteState example1_1m1() {
    return twinobs::mix({{2, 2}, {{0.5, triplet0()}, {0.5, tripletm1()}}});
}

// Two spin-1, |m1, m2> index (1 - m1) * 3 + (1 - m2).
inline Index idx(int m1, int m2) { return (1 - m1) * 3 + (1 - m2); }

// |2,0> = (|1,-1> + 2|0,0> + |-1,1>)/sqrt6, |1,0> = (|1,-1> - |-1,1>)/sqrt2,
// |0,0> = (|1,-1> - |0,0> + |-1,1>)/sqrt3
inline Vector s2m0() {
    const double r6 = std::sqrt(6.0);
    return ket(9, {{idx(1, -1), 1 / r6}, {idx(0, 0), 2 / r6}, {idx(-1, 1), 1 / r6}});
}
inline Vector s1m0() { return ket(9, {{idx(1, -1), M_SQRT1_2}, {idx(-1, 1), -M_SQRT1_2}}); }
inline Vector s0m0() {
    const double r3 = std::sqrt(3.0);
    return ket(9, {{idx(1, -1), 1 / r3}, {idx(0, 0), -1 / r3}, {idx(-1, 1), 1 / r3}});
}
// |2,1> = (|1,0> + |0,1>)/sqrt2, |1,1> = (|1,0> - |0,1>)/sqrt2
inline Vector s2m1() { return ket(9, {{idx(1, 0), M_SQRT1_2}, {idx(0, 1), M_SQRT1_2}}); }
inline Vector s1m1() { return ket(9, {{idx(1, 0), M_SQRT1_2}, {idx(0, 1), -M_SQRT1_2}}); }

inline BipartiteState example2_ms0() {
    return twinobs::mix({{3, 3}, {{1.0 / 3, s2m0()}, {1.0 / 3, s1m0()}, {1.0 / 3, s0m0()}}});
}
inline BipartiteState example2_ms1() {
    return twinobs::mix({{3, 3}, {{0.5, s2m1()}, {0.5, s1m1()}}});
}

}  // namespace fixture
