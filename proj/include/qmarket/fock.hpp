#ifndef QMARKET_FOCK_HPP
#define QMARKET_FOCK_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qmarket {

using Complex = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<Complex>;
using DenseMat = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Which bosonic mode a register describes.
enum class Register {
    TraderShares,    // a
    TraderCash,      // c
    Price,           // p
    ReservoirShares, // A_k
    ReservoirCash,   // C_k
    Supply           // o_k
};

std::string register_name(Register label);

struct RegisterSpec {
    Register label;
    int cutoff;     // max occupation number, >= 0
    int index = -1; // reservoir site k, or -1 for trader/price registers
};

/// Truncated multi-register number basis. Basis index 0 is the vacuum;
/// the first register varies slowest.
class FockSpace {
  public:
    explicit FockSpace(std::vector<RegisterSpec> registers);

    std::int64_t dimension() const { return dim_; }
    const std::vector<RegisterSpec>& registers() const { return regs_; }

    // position of (label, index) in the register list; throws if absent
    std::size_t find(Register label, int index = -1) const;

    std::int64_t basis_index(const std::vector<int>& occupations) const;
    std::vector<int> occupations(std::int64_t basis_index) const;

  private:
    std::vector<RegisterSpec> regs_;
    std::vector<std::int64_t> strides_;
    std::int64_t dim_ = 1;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

SpacePtr build_space(std::vector<RegisterSpec> registers);

/// An operator on a truncated Fock space, stored sparse (most market
/// operators have O(dim) nonzeros).
class FockOperator {
  public:
    FockOperator(SpacePtr space, SparseMat matrix);

    const SpacePtr& space() const { return space_; }
    const SparseMat& matrix() const { return mat_; }
    std::int64_t dimension() const { return space_->dimension(); }

    FockOperator adjoint() const;
    DenseMat dense() const { return DenseMat(mat_); }
    Vector apply(const Vector& v) const { return mat_ * v; }

    bool is_hermitian(double tol = 1e-12) const;
    double max_abs() const;

    FockOperator operator+(const FockOperator& rhs) const;
    FockOperator operator-(const FockOperator& rhs) const;
    FockOperator operator*(const FockOperator& rhs) const;
    friend FockOperator operator*(Complex scalar, const FockOperator& op);

  private:
    void check_same_space(const FockOperator& other) const;

    SpacePtr space_;
    SparseMat mat_;
};

FockOperator identity_op(const SpacePtr& space);
FockOperator zero_op(const SpacePtr& space);

// ladder action: lower |m> -> sqrt(m)|m-1>, raise |m> -> sqrt(m+1)|m+1>,
// truncated so raise annihilates the top level
FockOperator lower_op(const SpacePtr& space, Register label, int index = -1);
FockOperator raise_op(const SpacePtr& space, Register label, int index = -1);
FockOperator number_op(const SpacePtr& space, Register label, int index = -1);

/// Projector onto occupation m of one register.
FockOperator occupation_projector(const SpacePtr& space, Register label, int index, int m);

/// Spectral conditional power over the price register:
///   X^P = sum_m |m><m|_p (x) X^m.
/// The exponent register must be the price register; X must not act on it.
FockOperator conditional_power(const FockOperator& base, const SpacePtr& space);

/// Diagonal projector onto occupation tuples at least `margin` quanta below
/// every cutoff; per-register margins via the vector overload.
FockOperator interior_projector(const SpacePtr& space, int margin = 1);
FockOperator interior_projector(const SpacePtr& space, const std::vector<int>& margins);

/// Basis vector for a given occupation tuple.
Vector number_vector(const SpacePtr& space, const std::vector<int>& occupations);

/// max-norm of interior*(AB - BA - expected)*interior; expected defaults to 0.
double commutator_residual(const FockOperator& a, const FockOperator& b,
                           const FockOperator& interior,
                           const FockOperator* expected = nullptr);

} // namespace qmarket

#endif
