#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace oracle {

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k) m(i, k) = Complex(n(rng), n(rng));
    return m;
}

Matrix random_unitary(Index d, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_gaussian(d, d, rng));
    return qr.householderQ() * Matrix::Identity(d, d);
}

Matrix random_hermitian(Index d, Rng& rng) {
    const Matrix g = random_gaussian(d, d, rng);
    return (g + g.adjoint()) / 2.0;
}

Vector random_unit_vector(Index d, Rng& rng) {
    Vector v = random_gaussian(d, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_state(Index d, Index rank, Rng& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const Matrix g = random_gaussian(d, rank, rng);
    Matrix rho = Matrix::Zero(d, d);
    for (Index k = 0; k < rank; ++k) rho += u(rng) * g.col(k) * g.col(k).adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) / 2.0;
}

Matrix random_additive_state(Dims dims, Rng& rng, Matrix& b_plus, Matrix& b_minus,
                             double& b_value) {
    auto spectrum = [&](Index d) {
        std::vector<double> v(static_cast<std::size_t>(d));
        std::iota(v.begin(), v.end(), 0.0);
        std::shuffle(v.begin(), v.end(), rng);
        return v;
    };
    const auto sp = spectrum(dims.plus);
    const auto sm = spectrum(dims.minus);
    const Matrix up = random_unitary(dims.plus, rng);
    const Matrix um = random_unitary(dims.minus, rng);
    Matrix dp = Matrix::Zero(dims.plus, dims.plus);
    Matrix dm = Matrix::Zero(dims.minus, dims.minus);
    for (Index i = 0; i < dims.plus; ++i) dp(i, i) = sp[static_cast<std::size_t>(i)];
    for (Index i = 0; i < dims.minus; ++i) dm(i, i) = sm[static_cast<std::size_t>(i)];
    b_plus = up * dp * up.adjoint();
    b_minus = um * dm * um.adjoint();
    b_plus = (b_plus + b_plus.adjoint()) / 2.0;
    b_minus = (b_minus + b_minus.adjoint()) / 2.0;

    std::map<double, std::vector<Vector>> sectors;
    for (Index i = 0; i < dims.plus; ++i) {
        for (Index k = 0; k < dims.minus; ++k) {
            Vector v(dims.plus * dims.minus);
            for (Index a = 0; a < dims.plus; ++a)
                for (Index b = 0; b < dims.minus; ++b) v(a * dims.minus + b) = up(a, i) * um(b, k);
            sectors[sp[static_cast<std::size_t>(i)] + sm[static_cast<std::size_t>(k)]].push_back(v);
        }
    }
    std::vector<double> candidates;
    std::size_t best = 0;
    for (const auto& [b, vs] : sectors) best = std::max(best, vs.size());
    for (const auto& [b, vs] : sectors) {
        if (vs.size() == best) candidates.push_back(b);
    }
    b_value = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const auto& basis = sectors[b_value];
    const auto n = static_cast<Index>(basis.size());
    const Index rank = std::uniform_int_distribution<Index>(1, n)(rng);
    Matrix sector(dims.plus * dims.minus, n);
    for (Index c = 0; c < n; ++c) sector.col(c) = basis[static_cast<std::size_t>(c)];
    const Matrix inner = random_state(n, rank, rng);
    Matrix rho = sector * inner * sector.adjoint();
    return (rho + rho.adjoint()) / 2.0;
}

Matrix random_embedded_state(Dims dims, Dims inner, Index rank, Rng& rng) {
    const Matrix vp = random_unitary(dims.plus, rng).leftCols(inner.plus);
    const Matrix vm = random_unitary(dims.minus, rng).leftCols(inner.minus);
    const Matrix small = random_state(inner.plus * inner.minus, rank, rng);
    Matrix iso(dims.plus * dims.minus, inner.plus * inner.minus);
    for (Index a = 0; a < inner.plus; ++a) {
        for (Index b = 0; b < inner.minus; ++b) {
            Vector col(dims.plus * dims.minus);
            for (Index i = 0; i < dims.plus; ++i)
                for (Index k = 0; k < dims.minus; ++k) col(i * dims.minus + k) = vp(i, a) * vm(k, b);
            iso.col(a * inner.minus + b) = col;
        }
    }
    Matrix rho = iso * small * iso.adjoint();
    return (rho + rho.adjoint()) / 2.0;
}

RealMatrix gram_schmidt(const RealMatrix& columns, double tol) {
    std::vector<RealVector> kept;
    for (Index c = 0; c < columns.cols(); ++c) {
        RealVector v = columns.col(c);
        const double original = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : kept) v -= q.dot(v) * q;
        }
        if (v.norm() > tol * std::max(1.0, original)) kept.push_back(v / v.norm());
    }
    RealMatrix out(columns.rows(), static_cast<Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Index>(k)) = kept[k];
    return out;
}

double principal_distance(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.cols() || a.rows() != b.rows()) return 1.0;
    if (a.cols() == 0) return 0.0;
    // sin of the largest principal angle; the residual form keeps precision near zero.
    auto sine = [](const RealMatrix& p, const RealMatrix& q) {
        Eigen::BDCSVD<RealMatrix> svd(q - p * (p.transpose() * q));
        return svd.singularValues()(0);
    };
    return std::max(sine(a, b), sine(b, a));
}

RealVector vec_embed(const ObservablePair& pair) {
    const Index np = pair.plus.size();
    const Index nm = pair.minus.size();
    RealVector x(2 * (np + nm));
    Index k = 0;
    for (const Matrix* m : {&pair.plus, &pair.minus}) {
        for (Index i = 0; i < m->rows(); ++i) {
            for (Index j = 0; j < m->cols(); ++j) {
                x(k++) = (*m)(i, j).real();
                x(k++) = (*m)(i, j).imag();
            }
        }
    }
    return x;
}

ObservablePair vec_unembed(const RealVector& x, Dims dims) {
    ObservablePair p{Matrix(dims.plus, dims.plus), Matrix(dims.minus, dims.minus)};
    Index k = 0;
    for (Matrix* m : {&p.plus, &p.minus}) {
        for (Index i = 0; i < m->rows(); ++i) {
            for (Index j = 0; j < m->cols(); ++j) {
                (*m)(i, j) = Complex(x(k), x(k + 1));
                k += 2;
            }
        }
    }
    return p;
}

RealMatrix brute_force_twin_space(const Matrix& rho, Dims dims) {
    const Index dp = dims.plus;
    const Index dm = dims.minus;
    const Index n = dp * dm;
    const Index unknowns = 2 * (dp * dp + dm * dm);
    const Index herm_rows = 2 * (dp * dp + dm * dm);
    const Index twin_rows = 2 * n * n;
    RealMatrix m = RealMatrix::Zero(herm_rows + twin_rows, unknowns);

    auto unknown = [&](bool plus, Index i, Index j, bool imag) {
        const Index d = plus ? dp : dm;
        const Index base = plus ? 0 : 2 * dp * dp;
        return base + 2 * (i * d + j) + (imag ? 1 : 0);
    };

    Index row = 0;
    for (bool plus : {true, false}) {
        const Index d = plus ? dp : dm;
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                // Re A_ij - Re A_ji = 0 and Im A_ij + Im A_ji = 0
                m(row, unknown(plus, i, j, false)) += 1.0;
                m(row, unknown(plus, j, i, false)) -= 1.0;
                ++row;
                m(row, unknown(plus, i, j, true)) += 1.0;
                m(row, unknown(plus, j, i, true)) += 1.0;
                ++row;
            }
        }
    }
    // Entry (r, c) of (A+ (x) 1) rho - (1 (x) A-) rho.
    for (Index r = 0; r < n; ++r) {
        const Index rp = r / dm;
        const Index rm = r % dm;
        for (Index c = 0; c < n; ++c) {
            const Index re_row = row + 2 * (r * n + c);
            const Index im_row = re_row + 1;
            for (Index k = 0; k < dp; ++k) {
                // (A+)_{rp,k} rho_{(k,rm), c}
                const Complex z = rho(k * dm + rm, c);
                m(re_row, unknown(true, rp, k, false)) += z.real();
                m(re_row, unknown(true, rp, k, true)) -= z.imag();
                m(im_row, unknown(true, rp, k, false)) += z.imag();
                m(im_row, unknown(true, rp, k, true)) += z.real();
            }
            for (Index k = 0; k < dm; ++k) {
                const Complex z = rho(rp * dm + k, c);
                m(re_row, unknown(false, rm, k, false)) -= z.real();
                m(re_row, unknown(false, rm, k, true)) += z.imag();
                m(im_row, unknown(false, rm, k, false)) -= z.imag();
                m(im_row, unknown(false, rm, k, true)) -= z.real();
            }
        }
    }
    Eigen::BDCSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-9 * sv(0);
    Index rank = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(unknowns - rank);
}

RealMatrix embed_space(const std::vector<ObservablePair>& basis) {
    if (basis.empty()) return RealMatrix(0, 0);
    RealMatrix cols(vec_embed(basis[0]).size(), static_cast<Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) cols.col(static_cast<Index>(k)) = vec_embed(basis[k]);
    return gram_schmidt(cols);
}

Matrix partial_trace_plus_kept(const Matrix& rho, Dims dims) {
    Matrix out = Matrix::Zero(dims.plus, dims.plus);
    for (Index k = 0; k < dims.minus; ++k) {
        Matrix e = Matrix::Zero(dims.minus, 1);
        e(k, 0) = 1.0;
        const Matrix p = twinobs::kron(Matrix::Identity(dims.plus, dims.plus), e);
        out += p.adjoint() * rho * p;
    }
    return out;
}

Matrix partial_trace_minus_kept(const Matrix& rho, Dims dims) {
    Matrix out = Matrix::Zero(dims.minus, dims.minus);
    for (Index k = 0; k < dims.plus; ++k) {
        Matrix e = Matrix::Zero(dims.plus, 1);
        e(k, 0) = 1.0;
        const Matrix p = twinobs::kron(e, Matrix::Identity(dims.minus, dims.minus));
        out += p.adjoint() * rho * p;
    }
    return out;
}

Matrix gibbs_state(const Matrix& h, double temperature) {
    const Matrix e = (-h / temperature).exp();
    return e / e.trace().real();
}

namespace {

struct Cartesian {
    Matrix x, y, z;
};

Cartesian cartesian(int two_j) {
    const Index d = two_j + 1;
    const double j = 0.5 * two_j;
    Cartesian c{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
    for (Index r = 0; r < d; ++r) {
        const double m = j - static_cast<double>(r);
        c.z(r, r) = m;
        if (r > 0) {
            // <m+1| J+ |m>
            const double up = 0.5 * std::sqrt(j * (j + 1) - m * (m + 1));
            c.x(r - 1, r) += up;
            c.x(r, r - 1) += up;
            c.y(r - 1, r) += Complex(0.0, -up);
            c.y(r, r - 1) += Complex(0.0, up);
        }
    }
    return c;
}

}  // namespace

Matrix cartesian_total_spin_squared(int two_j1, int two_j2) {
    const Cartesian a = cartesian(two_j1);
    const Cartesian b = cartesian(two_j2);
    const Matrix ia = Matrix::Identity(two_j1 + 1, two_j1 + 1);
    const Matrix ib = Matrix::Identity(two_j2 + 1, two_j2 + 1);
    const Matrix sx = twinobs::kron(a.x, ib) + twinobs::kron(ia, b.x);
    const Matrix sy = twinobs::kron(a.y, ib) + twinobs::kron(ia, b.y);
    const Matrix sz = twinobs::kron(a.z, ib) + twinobs::kron(ia, b.z);
    return sx * sx + sy * sy + sz * sz;
}

}  // namespace oracle
