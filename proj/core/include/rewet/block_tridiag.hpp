#ifndef REWET_BLOCK_TRIDIAG_HPP
#define REWET_BLOCK_TRIDIAG_HPP

#include <span>
#include <vector>

namespace rewet {

/// Block-tridiagonal matrix with square blocks of size m and n block rows.
/// Storage is dense per block, row-major within a block.
class BlockTridiag {
public:
    BlockTridiag(int n_blocks, int block_size);

    int n_blocks() const { return n_; }
    int block_size() const { return m_; }
    int dim() const { return n_ * m_; }

    /// Element access; (row, col) are block-local indices in [0, m).
    double& diag(int block, int row, int col);
    double& lower(int block, int row, int col);  // block in [1, n): A[block][block-1]
    double& upper(int block, int row, int col);  // block in [0, n-1): A[block][block+1]
    double diag(int block, int row, int col) const;
    double lower(int block, int row, int col) const;
    double upper(int block, int row, int col) const;

    void set_zero();

    /// this = I - c * this (in place), used to form Newton iteration matrices.
    void scale_to_identity_minus(double c);

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    friend class BlockTridiagLU;
    int n_, m_;
    std::vector<double> d_, l_, u_;
};

/// Block LU factorization (block Thomas algorithm with partially pivoted
/// dense factorization of each pivot block).  Never forms the dense matrix.
class BlockTridiagLU {
public:
    /// Factors a copy of A.  Throws SolverFailureError on a singular pivot.
    explicit BlockTridiagLU(const BlockTridiag& A);

    /// Solve A x = b in place.
    void solve(std::span<double> b) const;

private:
    int n_, m_;
    std::vector<double> d_;        // factored pivot blocks
    std::vector<int> piv_;         // pivot indices per block
    std::vector<double> l_, u_;    // transformed off-diagonal blocks
};

}  // namespace rewet

#endif
