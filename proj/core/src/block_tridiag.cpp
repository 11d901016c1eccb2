#include "rewet/block_tridiag.hpp"

#include <cmath>
#include <cstring>

#include "rewet/errors.hpp"

namespace rewet {

namespace {

// In-place dense LU with partial pivoting of an m x m row-major block.
void lu_factor(double* a, int* piv, int m) {
    for (int k = 0; k < m; ++k) {
        int p = k;
        double amax = std::fabs(a[k * m + k]);
        for (int i = k + 1; i < m; ++i) {
            double v = std::fabs(a[i * m + k]);
            if (v > amax) {
                amax = v;
                p = i;
            }
        }
        if (amax == 0.0)
            throw SolverFailureError("singular pivot block in block LU", 0.0);
        piv[k] = p;
        if (p != k)
            for (int j = 0; j < m; ++j) std::swap(a[k * m + j], a[p * m + j]);
        double inv = 1.0 / a[k * m + k];
        for (int i = k + 1; i < m; ++i) {
            double f = a[i * m + k] * inv;
            a[i * m + k] = f;
            for (int j = k + 1; j < m; ++j) a[i * m + j] -= f * a[k * m + j];
        }
    }
}

// Solve LU x = b using the factors and pivots from lu_factor.
void lu_solve(const double* a, const int* piv, int m, double* b) {
    for (int k = 0; k < m; ++k) {
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
        for (int i = k + 1; i < m; ++i) b[i] -= a[i * m + k] * b[k];
    }
    for (int i = m - 1; i >= 0; --i) {
        for (int j = i + 1; j < m; ++j) b[i] -= a[i * m + j] * b[j];
        b[i] /= a[i * m + i];
    }
}

}  // namespace

BlockTridiag::BlockTridiag(int n_blocks, int block_size)
    : n_(n_blocks), m_(block_size) {
    size_t bs = static_cast<size_t>(m_) * m_;
    d_.assign(bs * n_, 0.0);
    l_.assign(bs * n_, 0.0);
    u_.assign(bs * n_, 0.0);
}

double& BlockTridiag::diag(int b, int r, int c) {
    return d_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}
double& BlockTridiag::lower(int b, int r, int c) {
    return l_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}
double& BlockTridiag::upper(int b, int r, int c) {
    return u_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}
double BlockTridiag::diag(int b, int r, int c) const {
    return d_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}
double BlockTridiag::lower(int b, int r, int c) const {
    return l_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}
double BlockTridiag::upper(int b, int r, int c) const {
    return u_[(static_cast<size_t>(b) * m_ + r) * m_ + c];
}

void BlockTridiag::set_zero() {
    std::fill(d_.begin(), d_.end(), 0.0);
    std::fill(l_.begin(), l_.end(), 0.0);
    std::fill(u_.begin(), u_.end(), 0.0);
}

void BlockTridiag::scale_to_identity_minus(double c) {
    for (double& v : d_) v *= -c;
    for (double& v : l_) v *= -c;
    for (double& v : u_) v *= -c;
    for (int b = 0; b < n_; ++b)
        for (int r = 0; r < m_; ++r) diag(b, r, r) += 1.0;
}

void BlockTridiag::multiply(std::span<const double> x,
                            std::span<double> y) const {
    for (int b = 0; b < n_; ++b) {
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            for (int c = 0; c < m_; ++c) {
                s += diag(b, r, c) * x[b * m_ + c];
                if (b > 0) s += lower(b, r, c) * x[(b - 1) * m_ + c];
                if (b < n_ - 1) s += upper(b, r, c) * x[(b + 1) * m_ + c];
            }
            y[b * m_ + r] = s;
        }
    }
}

BlockTridiagLU::BlockTridiagLU(const BlockTridiag& A)
    : n_(A.n_), m_(A.m_), d_(A.d_), l_(A.l_), u_(A.u_) {
    piv_.resize(static_cast<size_t>(n_) * m_);
    size_t bs = static_cast<size_t>(m_) * m_;
    std::vector<double> col(m_);

    // Block Thomas forward sweep: S_0 = D_0, S_i = D_i - L_i G_{i-1} with
    // G_{i-1} = S_{i-1}^{-1} U_{i-1}; u_ is overwritten with G.
    for (int b = 0; b < n_; ++b) {
        if (b > 0) {
            const double* G = &u_[(b - 1) * bs];
            const double* L = &l_[b * bs];
            double* D = &d_[b * bs];
            for (int r = 0; r < m_; ++r)
                for (int c = 0; c < m_; ++c) {
                    double s = 0.0;
                    for (int k = 0; k < m_; ++k) s += L[r * m_ + k] * G[k * m_ + c];
                    D[r * m_ + c] -= s;
                }
        }
        lu_factor(&d_[b * bs], &piv_[static_cast<size_t>(b) * m_], m_);
        if (b < n_ - 1) {
            // G_b = S_b^{-1} U_b, column by column.
            double* U = &u_[b * bs];
            for (int c = 0; c < m_; ++c) {
                for (int r = 0; r < m_; ++r) col[r] = U[r * m_ + c];
                lu_solve(&d_[b * bs], &piv_[static_cast<size_t>(b) * m_], m_,
                         col.data());
                for (int r = 0; r < m_; ++r) U[r * m_ + c] = col[r];
            }
        }
    }
}

void BlockTridiagLU::solve(std::span<double> b) const {
    size_t bs = static_cast<size_t>(m_) * m_;
    // forward: y_i = S_i^{-1} (b_i - L_i y_{i-1})
    for (int i = 0; i < n_; ++i) {
        double* bi = &b[static_cast<size_t>(i) * m_];
        if (i > 0) {
            const double* L = &l_[i * bs];
            const double* yp = &b[static_cast<size_t>(i - 1) * m_];
            for (int r = 0; r < m_; ++r) {
                double s = 0.0;
                for (int k = 0; k < m_; ++k) s += L[r * m_ + k] * yp[k];
                bi[r] -= s;
            }
        }
        lu_solve(&d_[i * bs], &piv_[static_cast<size_t>(i) * m_], m_, bi);
    }
    // backward: x_i = y_i - G_i x_{i+1}
    for (int i = n_ - 2; i >= 0; --i) {
        double* xi = &b[static_cast<size_t>(i) * m_];
        const double* G = &u_[i * bs];
        const double* xn = &b[static_cast<size_t>(i + 1) * m_];
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += G[r * m_ + k] * xn[k];
            xi[r] -= s;
        }
    }
}

}  // namespace rewet
