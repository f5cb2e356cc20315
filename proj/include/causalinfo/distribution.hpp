#pragma once

// Dense probability tables over tuples of discrete variables, conditional
// kernels, and the information measures built on them. All logarithms are
// base 2.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"

namespace causalinfo {

/// A discrete variable: vertex index plus alphabet size.
struct Variable {
    Vertex id = 0;
    std::size_t cardinality = 1;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Values for a subset of variables, keyed by vertex.
using PartialAssignment = std::map<Vertex, std::size_t>;

inline constexpr std::size_t max_table_entries = std::size_t{1} << 24;
inline constexpr double normalization_tolerance = 1e-12;

/// Number of joint assignments of `scope`; throws ModelTooLarge past 2^24.
inline std::size_t table_size(std::span<const Variable> scope) {
    std::size_t size = 1;
    for (const auto& v : scope) {
        if (v.cardinality == 0) throw Error(ErrorKind::ScopeMismatch, "variable with empty alphabet");
        if (size > max_table_entries / v.cardinality)
            throw Error(ErrorKind::ModelTooLarge, "joint table would exceed 2^24 entries");
        size *= v.cardinality;
    }
    return size;
}

/// Compensated (Neumaier) sum.
inline double accurate_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

/// Steps through every assignment of a mixed-radix tuple, last digit fastest.
class Odometer {
public:
    explicit Odometer(std::vector<std::size_t> radices) : radices_(std::move(radices)), digits_(radices_.size(), 0) {
        for (auto r : radices_)
            if (r == 0) done_ = true;
    }

    bool done() const { return done_; }
    const std::vector<std::size_t>& digits() const { return digits_; }

    /// Advances and returns the position of the most significant digit that changed.
    std::size_t next() {
        for (std::size_t p = digits_.size(); p-- > 0;) {
            if (++digits_[p] < radices_[p]) return p;
            digits_[p] = 0;
        }
        done_ = true;
        return 0;
    }

private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> digits_;
    bool done_ = false;
};

/// Exact joint distribution over an ordered scope, stored densely in
/// mixed-radix order (last scope variable varies fastest).
class JointTable {
public:
    /// The distribution over the empty scope.
    JointTable() : probs_{1.0} {}

    JointTable(std::vector<Variable> scope, std::vector<double> probs)
        : scope_(std::move(scope)), probs_(std::move(probs)) {
        for (std::size_t i = 0; i < scope_.size(); ++i)
            for (std::size_t j = i + 1; j < scope_.size(); ++j)
                if (scope_[i].id == scope_[j].id)
                    throw Error(ErrorKind::ScopeMismatch, "variable " + std::to_string(scope_[i].id) +
                                                              " appears twice in a scope");
        if (probs_.size() != table_size(scope_))
            throw Error(ErrorKind::ScopeMismatch, "table has " + std::to_string(probs_.size()) +
                                                      " entries, scope needs " +
                                                      std::to_string(table_size(scope_)));
        for (double p : probs_)
            if (!(p >= 0.0) || !std::isfinite(p))
                throw Error(ErrorKind::InvalidModel, "probability table has a negative or non-finite entry");
        const double total = accurate_sum(probs_);
        if (std::abs(total - 1.0) > normalization_tolerance)
            throw Error(ErrorKind::InvalidModel, "probability table sums to " + std::to_string(total));
    }

    const std::vector<Variable>& scope() const { return scope_; }
    std::span<const double> probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t index) const { return probs_[index]; }

    VertexSet variables() const {
        std::vector<Vertex> ids;
        for (const auto& v : scope_) ids.push_back(v.id);
        return VertexSet(std::move(ids));
    }

    std::optional<std::size_t> position_of(Vertex id) const {
        for (std::size_t p = 0; p < scope_.size(); ++p)
            if (scope_[p].id == id) return p;
        return std::nullopt;
    }

    /// Flat index of an assignment given in scope order.
    std::size_t index_of(std::span<const std::size_t> values) const {
        if (values.size() != scope_.size()) throw Error(ErrorKind::ScopeMismatch, "assignment length mismatch");
        std::size_t index = 0;
        for (std::size_t p = 0; p < scope_.size(); ++p) {
            if (values[p] >= scope_[p].cardinality) throw Error(ErrorKind::InvalidSpec, "value out of range");
            index = index * scope_[p].cardinality + values[p];
        }
        return index;
    }

    std::vector<std::size_t> decode(std::size_t index) const {
        std::vector<std::size_t> values(scope_.size());
        for (std::size_t p = scope_.size(); p-- > 0;) {
            values[p] = index % scope_[p].cardinality;
            index /= scope_[p].cardinality;
        }
        return values;
    }

    /// Probability of a full assignment of the scope given by vertex.
    double at(const PartialAssignment& values) const {
        std::vector<std::size_t> digits(scope_.size());
        for (std::size_t p = 0; p < scope_.size(); ++p) {
            auto it = values.find(scope_[p].id);
            if (it == values.end()) throw Error(ErrorKind::ScopeMismatch, "assignment misses a scope variable");
            digits[p] = it->second;
        }
        return probs_[index_of(digits)];
    }

private:
    std::vector<Variable> scope_;
    std::vector<double> probs_;
};

/// Extended nonnegative real in bits; +infinity is a legitimate value.
class InfoValue {
public:
    constexpr InfoValue() = default;

    /// Rounding can leave sums of nonnegative terms a few ulps below zero;
    /// those are reported as 0. Anything clearly negative is a logic error.
    explicit InfoValue(double bits) : bits_(bits) {
        if (std::isnan(bits)) throw std::domain_error("information value is NaN");
        if (bits < 0.0) {
            if (bits < -1e-9) throw std::domain_error("information value is negative: " + std::to_string(bits));
            bits_ = 0.0;
        }
    }

    static InfoValue infinite() { return InfoValue(std::numeric_limits<double>::infinity()); }

    double bits() const { return bits_; }
    bool is_finite() const { return std::isfinite(bits_); }

    friend InfoValue operator+(InfoValue a, InfoValue b) { return InfoValue(a.bits_ + b.bits_); }
    friend auto operator<=>(const InfoValue&, const InfoValue&) = default;

private:
    double bits_ = 0.0;
};

/// Conditional distribution of an output tuple given an input tuple. Row r
/// holds the output distribution for the r-th input assignment in mixed-radix
/// order; rows whose input has zero mass are flagged undefined.
class Kernel {
public:
    Kernel(std::vector<Variable> input, std::vector<Variable> output, std::vector<double> probs,
           std::vector<bool> defined)
        : input_(std::move(input)), output_(std::move(output)), probs_(std::move(probs)),
          defined_(std::move(defined)) {
        for (const auto& a : input_)
            for (const auto& b : output_)
                if (a.id == b.id) throw Error(ErrorKind::ScopeMismatch, "kernel input and output overlap");
        rows_ = table_size(input_);
        cols_ = table_size(output_);
        if (probs_.size() != rows_ * cols_ || defined_.size() != rows_)
            throw Error(ErrorKind::ScopeMismatch, "kernel storage does not match its scopes");
    }

    const std::vector<Variable>& input_scope() const { return input_; }
    const std::vector<Variable>& output_scope() const { return output_; }
    std::size_t row_count() const { return rows_; }
    std::size_t column_count() const { return cols_; }
    bool defined(std::size_t row) const { return defined_.at(row); }
    double operator()(std::size_t row, std::size_t col) const { return probs_[row * cols_ + col]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(probs_).subspan(r * cols_, cols_);
    }

    JointTable row_table(std::size_t r) const {
        if (!defined(r))
            throw Error(ErrorKind::UndefinedConditional, "kernel row " + std::to_string(r) + " is undefined");
        auto values = row(r);
        return JointTable(output_, std::vector<double>(values.begin(), values.end()));
    }

private:
    std::vector<Variable> input_;
    std::vector<Variable> output_;
    std::vector<double> probs_;
    std::vector<bool> defined_;
    std::size_t rows_ = 1;
    std::size_t cols_ = 1;
};

namespace detail {

/// Projects every cell of a table onto the assignment spaces of several
/// variable groups. Group members are vertex ids; each group is indexed in
/// its own listed order, last member fastest.
class GroupProjection {
public:
    GroupProjection(const std::vector<Variable>& scope, const std::vector<VertexSet>& groups)
        : scope_(scope), sizes_(groups.size(), 1), coef_(scope.size(), std::vector<std::size_t>(groups.size(), 0)) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::vector<std::size_t> positions;
            for (Vertex id : groups[g]) {
                std::optional<std::size_t> pos;
                for (std::size_t p = 0; p < scope.size(); ++p)
                    if (scope[p].id == id) pos = p;
                if (!pos)
                    throw Error(ErrorKind::ScopeMismatch,
                                "variable " + std::to_string(id) + " is not in the table's scope");
                positions.push_back(*pos);
            }
            std::size_t stride = 1;
            for (std::size_t k = positions.size(); k-- > 0;) {
                coef_[positions[k]][g] = stride;
                stride *= scope[positions[k]].cardinality;
            }
            sizes_[g] = stride;
        }
    }

    std::size_t group_size(std::size_t g) const { return sizes_[g]; }

    /// Calls f(cell, group_indices) for every cell in storage order.
    template <class F>
    void for_each(F&& f) const {
        std::vector<std::size_t> radices;
        for (const auto& v : scope_) radices.push_back(v.cardinality);
        Odometer odo(radices);
        std::vector<std::size_t> index(sizes_.size(), 0);
        std::size_t cell = 0;
        while (!odo.done()) {
            std::fill(index.begin(), index.end(), 0);
            for (std::size_t p = 0; p < scope_.size(); ++p)
                for (std::size_t g = 0; g < index.size(); ++g) index[g] += coef_[p][g] * odo.digits()[p];
            f(cell, std::span<const std::size_t>(index));
            ++cell;
            odo.next();
        }
    }

private:
    const std::vector<Variable>& scope_;
    std::vector<std::size_t> sizes_;
    std::vector<std::vector<std::size_t>> coef_;  // [scope position][group]
};

inline std::vector<Variable> sub_scope(const std::vector<Variable>& scope, const VertexSet& ids) {
    std::vector<Variable> out;
    for (Vertex id : ids) {
        auto it = std::find_if(scope.begin(), scope.end(), [&](const Variable& v) { return v.id == id; });
        if (it == scope.end())
            throw Error(ErrorKind::ScopeMismatch, "variable " + std::to_string(id) + " is not in the table's scope");
        out.push_back(*it);
    }
    return out;
}

/// Dense array P[g0][g1]... of a table regrouped by vertex sets.
inline std::vector<double> regroup(const JointTable& table, const std::vector<VertexSet>& groups,
                                   std::vector<std::size_t>* sizes = nullptr) {
    GroupProjection proj(table.scope(), groups);
    std::size_t total = 1;
    for (std::size_t g = 0; g < groups.size(); ++g) total *= proj.group_size(g);
    std::vector<double> out(total, 0.0);
    proj.for_each([&](std::size_t cell, std::span<const std::size_t> idx) {
        std::size_t flat = 0;
        for (std::size_t g = 0; g < idx.size(); ++g) flat = flat * proj.group_size(g) + idx[g];
        out[flat] += table[cell];
    });
    if (sizes) {
        sizes->clear();
        for (std::size_t g = 0; g < groups.size(); ++g) sizes->push_back(proj.group_size(g));
    }
    return out;
}

inline void require_disjoint(std::initializer_list<const VertexSet*> sets, ErrorKind kind) {
    for (auto i = sets.begin(); i != sets.end(); ++i)
        for (auto j = std::next(i); j != sets.end(); ++j)
            if (!disjoint(**i, **j)) throw Error(kind, "variable sets must be pairwise disjoint");
}

// Renormalizes a row whose rounding drifted; the caller has checked mass > 0.
inline void normalize_in_place(std::span<double> row) {
    const double mass = accurate_sum(row);
    for (double& p : row) p /= mass;
}

inline double log2_ratio_term(double p, double q) {
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log2(p / q);
}

}  // namespace detail

/// Marginal over T, with scope ordered by vertex index.
inline JointTable marginal(const JointTable& table, const VertexSet& t) {
    auto scope = detail::sub_scope(table.scope(), t);
    auto probs = detail::regroup(table, {t});
    return JointTable(std::move(scope), std::move(probs));
}

/// Observational conditioning: the renormalized slice over scope \ E.
inline JointTable condition(const JointTable& table, const PartialAssignment& evidence) {
    std::vector<Vertex> ids;
    for (const auto& [id, value] : evidence) ids.push_back(id);
    const VertexSet e(std::move(ids));
    const VertexSet rest = set_difference(table.variables(), e);
    const auto e_scope = detail::sub_scope(table.scope(), e);

    std::size_t e_index = 0;
    for (const auto& var : e_scope) {
        const std::size_t value = evidence.at(var.id);
        if (value >= var.cardinality)
            throw Error(ErrorKind::ZeroProbabilityEvidence, "evidence value " + std::to_string(value) +
                                                                " lies outside the alphabet of variable " +
                                                                std::to_string(var.id));
        e_index = e_index * var.cardinality + value;
    }

    std::vector<std::size_t> sizes;
    auto grouped = detail::regroup(table, {e, rest}, &sizes);
    std::vector<double> slice(grouped.begin() + static_cast<std::ptrdiff_t>(e_index * sizes[1]),
                              grouped.begin() + static_cast<std::ptrdiff_t>((e_index + 1) * sizes[1]));
    const double mass = accurate_sum(slice);
    if (!(mass > 0.0)) throw Error(ErrorKind::ZeroProbabilityEvidence, "evidence has probability zero");
    for (double& p : slice) p /= mass;
    return JointTable(detail::sub_scope(table.scope(), rest), std::move(slice));
}

/// Conditional kernel P(output | input) derived from a joint table.
inline Kernel kernel_of(const JointTable& table, const VertexSet& output, const VertexSet& input) {
    detail::require_disjoint({&output, &input}, ErrorKind::ScopeMismatch);
    std::vector<std::size_t> sizes;
    auto probs = detail::regroup(table, {input, output}, &sizes);
    std::vector<bool> defined(sizes[0], false);
    for (std::size_t r = 0; r < sizes[0]; ++r) {
        std::span<double> row(probs.data() + r * sizes[1], sizes[1]);
        const double mass = accurate_sum(row);
        if (mass > 0.0) {
            defined[r] = true;
            for (double& p : row) p /= mass;
        } else {
            std::fill(row.begin(), row.end(), 0.0);
        }
    }
    return Kernel(detail::sub_scope(table.scope(), input), detail::sub_scope(table.scope(), output),
                  std::move(probs), std::move(defined));
}

inline JointTable outer_product(const JointTable& a, const JointTable& b) {
    std::vector<Variable> scope = a.scope();
    scope.insert(scope.end(), b.scope().begin(), b.scope().end());
    std::vector<double> probs;
    probs.reserve(a.size() * b.size());
    for (double p : a.probs())
        for (double q : b.probs()) probs.push_back(p * q);
    return JointTable(std::move(scope), std::move(probs));
}

/// Divergence between two raw distributions on the same alphabet.
inline InfoValue kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(ErrorKind::ScopeMismatch, "distributions have different sizes");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double term = detail::log2_ratio_term(p[i], q[i]);
        if (std::isinf(term)) return InfoValue::infinite();
        sum += term;
    }
    return InfoValue(sum);
}

inline InfoValue kl_divergence(const JointTable& p, const JointTable& q) {
    if (p.scope() != q.scope()) throw Error(ErrorKind::ScopeMismatch, "divergence needs identical scopes");
    return kl_divergence(p.probs(), q.probs());
}

/// Total-variation distance, half the L1 distance.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(ErrorKind::ScopeMismatch, "distributions have different sizes");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

inline double total_variation(const JointTable& p, const JointTable& q) {
    if (p.scope() != q.scope()) throw Error(ErrorKind::ScopeMismatch, "distance needs identical scopes");
    return total_variation(p.probs(), q.probs());
}

/// D(P || Q | base): per-row divergences averaged under `base`. Rows with zero
/// base weight are skipped, defined or not.
inline InfoValue conditional_divergence(const Kernel& p, const Kernel& q, const JointTable& base) {
    if (p.input_scope() != q.input_scope() || p.output_scope() != q.output_scope())
        throw Error(ErrorKind::ScopeMismatch, "kernels have different scopes");
    if (base.scope() != p.input_scope())
        throw Error(ErrorKind::ScopeMismatch, "base distribution must be over the kernel input scope");
    double sum = 0.0;
    for (std::size_t r = 0; r < p.row_count(); ++r) {
        const double w = base[r];
        if (w <= 0.0) continue;
        if (!p.defined(r) || !q.defined(r))
            throw Error(ErrorKind::UndefinedConditional, "kernel row with positive base weight is undefined");
        const InfoValue d = kl_divergence(p.row(r), q.row(r));
        if (!d.is_finite()) return InfoValue::infinite();
        sum += w * d.bits();
    }
    return InfoValue(sum);
}

/// I(A; B | Z) in bits; Z may be empty.
inline InfoValue conditional_mutual_information(const JointTable& table, const VertexSet& a, const VertexSet& b,
                                                const VertexSet& z) {
    detail::require_disjoint({&a, &b, &z}, ErrorKind::ScopeMismatch);
    std::vector<std::size_t> n;
    const auto pzab = detail::regroup(table, {z, a, b}, &n);
    double sum = 0.0;
    std::vector<double> pa(n[1]), pb(n[2]);
    for (std::size_t iz = 0; iz < n[0]; ++iz) {
        const double* block = pzab.data() + iz * n[1] * n[2];
        std::fill(pa.begin(), pa.end(), 0.0);
        std::fill(pb.begin(), pb.end(), 0.0);
        double pz = 0.0;
        for (std::size_t ia = 0; ia < n[1]; ++ia)
            for (std::size_t ib = 0; ib < n[2]; ++ib) {
                const double p = block[ia * n[2] + ib];
                pa[ia] += p;
                pb[ib] += p;
                pz += p;
            }
        if (pz <= 0.0) continue;
        for (std::size_t ia = 0; ia < n[1]; ++ia)
            for (std::size_t ib = 0; ib < n[2]; ++ib) {
                const double p = block[ia * n[2] + ib];
                if (p > 0.0) sum += p * std::log2(p * pz / (pa[ia] * pb[ib]));
            }
    }
    return InfoValue(sum);
}

inline InfoValue mutual_information(const JointTable& table, const VertexSet& a, const VertexSet& b) {
    return conditional_mutual_information(table, a, b, VertexSet{});
}

}  // namespace causalinfo
