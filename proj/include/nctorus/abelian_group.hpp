#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nctorus/exponent.hpp"
#include "nctorus/phase.hpp"

namespace nctorus {

/**
 * Finite abelian group Z/d_1 x ... x Z/d_r in invariant-factor form
 * (d_1 | d_2 | ... , every d_i >= 2). Elements are coordinate tuples with
 * 0 <= a_i < d_i; index() enumerates them in lexicographic order.
 *
 * The character group has the same invariant factors; the character with
 * coordinates c evaluates to sum_i c_i a_i / d_i.
 */
class FiniteAbelianGroup {
public:
    using Element = std::vector<std::int64_t>;

    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<std::int64_t> factors);
    /// Any list of cyclic orders; regrouped into invariant factors.
    static FiniteAbelianGroup from_cyclic(const std::vector<std::int64_t>& orders);

    const std::vector<std::int64_t>& factors() const noexcept { return factors_; }
    int rank() const noexcept { return static_cast<int>(factors_.size()); }
    std::size_t order() const noexcept { return order_; }
    std::int64_t exponent() const noexcept { return factors_.empty() ? 1 : factors_.back(); }

    Element zero() const { return Element(factors_.size(), 0); }
    Element generator(int i) const;
    Element reduce(const Exponent& v) const;
    bool contains(const Element& a) const;

    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    Element scale(const Element& a, std::int64_t k) const;

    std::size_t index(const Element& a) const;
    Element element(std::size_t index) const;
    std::vector<Element> elements() const;

    /// Index arithmetic used by the table-driven modules.
    std::size_t add_index(std::size_t a, std::size_t b) const { return add_table_[a * order_ + b]; }
    std::size_t neg_index(std::size_t a) const { return neg_table_[a]; }
    std::size_t sub_index(std::size_t a, std::size_t b) const { return add_index(a, neg_index(b)); }

    /// <chi, a> for chi in the dual group (same coordinates convention).
    Phase pairing(const Element& chi, const Element& a) const;

    std::string to_string() const;
    friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.factors_ == b.factors_; }

private:
    void build_tables();

    std::vector<std::int64_t> factors_;
    std::size_t order_ = 1;
    std::vector<std::size_t> add_table_{0};
    std::vector<std::size_t> neg_table_{0};
};

/// Every abelian group of order n, one per isomorphism class.
std::vector<FiniteAbelianGroup> abelian_groups_of_order(std::int64_t n);
/// Every abelian group of order 1..n.
std::vector<FiniteAbelianGroup> abelian_groups_up_to(std::int64_t n);

struct GroupCocycleCheck {
    bool ok = true;
    std::optional<std::array<std::size_t, 3>> witness;
    Phase defect;
};

/**
 * Full table of a 2-cochain G x G -> Q/Z, indexed by element index.
 */
class GroupCochain {
public:
    GroupCochain() = default;
    GroupCochain(FiniteAbelianGroup group, std::vector<Phase> values);

    static GroupCochain trivial(const FiniteAbelianGroup& group);
    static GroupCochain tabulate(const FiniteAbelianGroup& group,
                                 const std::function<Phase(const FiniteAbelianGroup::Element&,
                                                           const FiniteAbelianGroup::Element&)>& fn);
    /// phi(a, b) = sum_{i,j} a_i b_j m_ij. Throws unless d_i m_ij = d_j m_ij = 0.
    static GroupCochain bilinear(const FiniteAbelianGroup& group, const std::vector<std::vector<Phase>>& m);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<Phase>& values() const noexcept { return values_; }

    Phase operator()(std::size_t a, std::size_t b) const { return values_[a * group_.order() + b]; }
    Phase operator()(const FiniteAbelianGroup::Element& a, const FiniteAbelianGroup::Element& b) const {
        return (*this)(group_.index(a), group_.index(b));
    }
    void set(std::size_t a, std::size_t b, Phase p) { values_[a * group_.order() + b] = p; }

    GroupCochain inverse() const;
    GroupCochain operator+(const GroupCochain& other) const;
    /// phi(a,b) + alpha(a) + alpha(b) - alpha(a+b).
    GroupCochain coboundary(const std::vector<Phase>& alpha) const;
    /// Alternating form phi(a,b) - phi(b,a).
    GroupCochain antisymmetrization() const;

    GroupCocycleCheck check_cocycle() const;

    friend bool operator==(const GroupCochain&, const GroupCochain&) = default;

private:
    FiniteAbelianGroup group_;
    std::vector<Phase> values_;
};

} // namespace nctorus
