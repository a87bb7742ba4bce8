#include "qmarket/fock.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qmarket {

std::string register_name(Register label) {
    switch (label) {
        case Register::TraderShares: return "a";
        case Register::TraderCash: return "c";
        case Register::Price: return "p";
        case Register::ReservoirShares: return "A";
        case Register::ReservoirCash: return "C";
        case Register::Supply: return "o";
    }
    return "?";
}

FockSpace::FockSpace(std::vector<RegisterSpec> registers) : regs_(std::move(registers)) {
    if (regs_.empty())
        throw std::invalid_argument("FockSpace: register list is empty");
    std::set<std::pair<int, int>> seen;
    for (const auto& r : regs_) {
        if (r.cutoff < 0)
            throw std::invalid_argument("FockSpace: cutoff must be >= 0 for register " +
                                        register_name(r.label));
        if (!seen.insert({static_cast<int>(r.label), r.index}).second)
            throw std::invalid_argument("FockSpace: duplicate register " +
                                        register_name(r.label));
    }
    // first register slowest: strides built back-to-front
    strides_.assign(regs_.size(), 1);
    for (std::size_t i = regs_.size(); i-- > 0;) {
        strides_[i] = dim_;
        dim_ *= regs_[i].cutoff + 1;
    }
}

std::size_t FockSpace::find(Register label, int index) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].label == label && regs_[i].index == index)
            return i;
    std::ostringstream os;
    os << "FockSpace: no register " << register_name(label);
    if (index >= 0) os << "_" << index;
    throw std::invalid_argument(os.str());
}

std::int64_t FockSpace::basis_index(const std::vector<int>& occ) const {
    if (occ.size() != regs_.size())
        throw std::invalid_argument("basis_index: occupation tuple has wrong length");
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < regs_.size(); ++i) {
        if (occ[i] < 0 || occ[i] > regs_[i].cutoff)
            throw std::out_of_range("basis_index: occupation outside [0, cutoff]");
        idx += occ[i] * strides_[i];
    }
    return idx;
}

std::vector<int> FockSpace::occupations(std::int64_t idx) const {
    if (idx < 0 || idx >= dim_)
        throw std::out_of_range("occupations: basis index out of range");
    std::vector<int> occ(regs_.size());
    for (std::size_t i = 0; i < regs_.size(); ++i) {
        occ[i] = static_cast<int>(idx / strides_[i]);
        idx %= strides_[i];
    }
    return occ;
}

SpacePtr build_space(std::vector<RegisterSpec> registers) {
    return std::make_shared<const FockSpace>(std::move(registers));
}

FockOperator::FockOperator(SpacePtr space, SparseMat matrix)
    : space_(std::move(space)), mat_(std::move(matrix)) {
    if (!space_)
        throw std::invalid_argument("FockOperator: null space");
    if (mat_.rows() != space_->dimension() || mat_.cols() != space_->dimension())
        throw std::invalid_argument("FockOperator: matrix size does not match space dimension");
}

void FockOperator::check_same_space(const FockOperator& other) const {
    if (space_ == other.space_) return;
    // distinct space objects are allowed if structurally identical
    const auto& a = space_->registers();
    const auto& b = other.space_->registers();
    if (a.size() == b.size()) {
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && a[i].label == b[i].label && a[i].cutoff == b[i].cutoff &&
                   a[i].index == b[i].index;
        if (same) return;
    }
    throw std::invalid_argument("FockOperator: operands live on different spaces");
}

FockOperator FockOperator::adjoint() const {
    return FockOperator(space_, SparseMat(mat_.adjoint()));
}

bool FockOperator::is_hermitian(double tol) const {
    SparseMat diff = mat_ - SparseMat(mat_.adjoint());
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMat::InnerIterator it(diff, k); it; ++it)
            if (std::abs(it.value()) > tol) return false;
    return true;
}

double FockOperator::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SparseMat::InnerIterator it(mat_, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
    check_same_space(rhs);
    return FockOperator(space_, SparseMat(mat_ + rhs.mat_));
}

FockOperator FockOperator::operator-(const FockOperator& rhs) const {
    check_same_space(rhs);
    return FockOperator(space_, SparseMat(mat_ - rhs.mat_));
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
    check_same_space(rhs);
    SparseMat prod = mat_ * rhs.mat_;
    prod.prune(0.0, 0.0);
    return FockOperator(space_, std::move(prod));
}

FockOperator operator*(Complex scalar, const FockOperator& op) {
    return FockOperator(op.space_, SparseMat(scalar * op.mat_));
}

FockOperator identity_op(const SpacePtr& space) {
    SparseMat m(space->dimension(), space->dimension());
    m.setIdentity();
    return FockOperator(space, std::move(m));
}

FockOperator zero_op(const SpacePtr& space) {
    return FockOperator(space, SparseMat(space->dimension(), space->dimension()));
}

namespace {

// generic single-register ladder; raise truncates at the cutoff
FockOperator ladder(const SpacePtr& space, Register label, int index, bool raise) {
    const std::size_t reg = space->find(label, index);
    const int cutoff = space->registers()[reg].cutoff;
    const std::int64_t dim = space->dimension();
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(dim));
    for (std::int64_t j = 0; j < dim; ++j) {
        auto occ = space->occupations(j);
        const int m = occ[reg];
        if (raise) {
            if (m + 1 > cutoff) continue;
            occ[reg] = m + 1;
            trips.emplace_back(space->basis_index(occ), j, std::sqrt(double(m + 1)));
        } else {
            if (m == 0) continue;
            occ[reg] = m - 1;
            trips.emplace_back(space->basis_index(occ), j, std::sqrt(double(m)));
        }
    }
    SparseMat mat(dim, dim);
    mat.setFromTriplets(trips.begin(), trips.end());
    return FockOperator(space, std::move(mat));
}

} // namespace

FockOperator lower_op(const SpacePtr& space, Register label, int index) {
    return ladder(space, label, index, false);
}

FockOperator raise_op(const SpacePtr& space, Register label, int index) {
    return ladder(space, label, index, true);
}

FockOperator number_op(const SpacePtr& space, Register label, int index) {
    const std::size_t reg = space->find(label, index);
    const std::int64_t dim = space->dimension();
    SparseMat mat(dim, dim);
    mat.reserve(Eigen::VectorXi::Constant(static_cast<int>(dim), 1));
    for (std::int64_t j = 0; j < dim; ++j) {
        const int m = space->occupations(j)[reg];
        if (m > 0) mat.insert(j, j) = double(m);
    }
    mat.makeCompressed();
    return FockOperator(space, std::move(mat));
}

FockOperator occupation_projector(const SpacePtr& space, Register label, int index, int m) {
    const std::size_t reg = space->find(label, index);
    if (m < 0 || m > space->registers()[reg].cutoff)
        throw std::out_of_range("occupation_projector: level outside [0, cutoff]");
    const std::int64_t dim = space->dimension();
    SparseMat mat(dim, dim);
    mat.reserve(Eigen::VectorXi::Constant(static_cast<int>(dim), 1));
    for (std::int64_t j = 0; j < dim; ++j)
        if (space->occupations(j)[reg] == m) mat.insert(j, j) = 1.0;
    mat.makeCompressed();
    return FockOperator(space, std::move(mat));
}

FockOperator conditional_power(const FockOperator& base, const SpacePtr& space) {
    std::size_t price;
    try {
        price = space->find(Register::Price);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(
            "conditional_power: exponent register must be the price register");
    }
    const int pcut = space->registers()[price].cutoff;
    FockOperator result = occupation_projector(space, Register::Price, -1, 0);
    FockOperator power = identity_op(space);
    for (int m = 1; m <= pcut; ++m) {
        power = power * base;
        result = result + occupation_projector(space, Register::Price, -1, m) * power;
    }
    return result;
}

FockOperator interior_projector(const SpacePtr& space, int margin) {
    return interior_projector(space,
                              std::vector<int>(space->registers().size(), margin));
}

FockOperator interior_projector(const SpacePtr& space, const std::vector<int>& margins) {
    const auto& regs = space->registers();
    if (margins.size() != regs.size())
        throw std::invalid_argument("interior_projector: one margin per register required");
    const std::int64_t dim = space->dimension();
    SparseMat mat(dim, dim);
    mat.reserve(Eigen::VectorXi::Constant(static_cast<int>(dim), 1));
    for (std::int64_t j = 0; j < dim; ++j) {
        const auto occ = space->occupations(j);
        bool inside = true;
        for (std::size_t i = 0; i < regs.size(); ++i)
            inside = inside && occ[i] <= regs[i].cutoff - margins[i];
        if (inside) mat.insert(j, j) = 1.0;
    }
    mat.makeCompressed();
    return FockOperator(space, std::move(mat));
}

Vector number_vector(const SpacePtr& space, const std::vector<int>& occupations) {
    Vector v = Vector::Zero(space->dimension());
    v[space->basis_index(occupations)] = 1.0;
    return v;
}

double commutator_residual(const FockOperator& a, const FockOperator& b,
                           const FockOperator& interior, const FockOperator* expected) {
    FockOperator comm = a * b - b * a;
    if (expected) comm = comm - *expected;
    return (interior * comm * interior).max_abs();
}

} // namespace qmarket
