#include "nctorus/abelian_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nctorus/intmat.hpp"

namespace nctorus {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2) throw std::invalid_argument("invariant factors must be >= 2");
        if (i > 0 && factors_[i] % factors_[i - 1] != 0)
            throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
    build_tables();
}

FiniteAbelianGroup FiniteAbelianGroup::from_cyclic(const std::vector<std::int64_t>& orders) {
    IntMatrix d = IntMatrix::Zero(static_cast<Eigen::Index>(orders.size()), static_cast<Eigen::Index>(orders.size()));
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 1) throw std::invalid_argument("cyclic orders must be positive");
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = orders[i];
    }
    const auto snf = smith_normal_form(d);
    std::vector<std::int64_t> factors;
    for (Eigen::Index i = 0; i < snf.D.rows(); ++i)
        if (snf.D(i, i) > 1) factors.push_back(snf.D(i, i));
    return FiniteAbelianGroup(std::move(factors));
}

void FiniteAbelianGroup::build_tables() {
    order_ = 1;
    for (auto d : factors_) order_ *= static_cast<std::size_t>(d);
    add_table_.assign(order_ * order_, 0);
    neg_table_.assign(order_, 0);
    const auto elems = elements();
    for (std::size_t a = 0; a < order_; ++a) {
        neg_table_[a] = index(neg(elems[a]));
        for (std::size_t b = 0; b < order_; ++b) add_table_[a * order_ + b] = index(add(elems[a], elems[b]));
    }
}

FiniteAbelianGroup::Element FiniteAbelianGroup::generator(int i) const {
    Element e = zero();
    e.at(static_cast<std::size_t>(i)) = 1;
    return e;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::reduce(const Exponent& v) const {
    if (v.size() != factors_.size()) throw std::invalid_argument("element has wrong rank");
    Element r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = floor_mod(v[i], factors_[i]);
    return r;
}

bool FiniteAbelianGroup::contains(const Element& a) const {
    if (a.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < 0 || a[i] >= factors_[i]) return false;
    return true;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::add(const Element& a, const Element& b) const { return reduce(a + b); }
FiniteAbelianGroup::Element FiniteAbelianGroup::sub(const Element& a, const Element& b) const { return reduce(a - b); }
FiniteAbelianGroup::Element FiniteAbelianGroup::neg(const Element& a) const { return reduce(-a); }

FiniteAbelianGroup::Element FiniteAbelianGroup::scale(const Element& a, std::int64_t k) const {
    Element r = a;
    for (auto& x : r) x *= k;
    return reduce(r);
}

std::size_t FiniteAbelianGroup::index(const Element& a) const {
    if (!contains(a)) throw std::out_of_range("element " + nctorus::to_string(a) + " not in " + to_string());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx = idx * static_cast<std::size_t>(factors_[i]) + static_cast<std::size_t>(a[i]);
    return idx;
}

FiniteAbelianGroup::Element FiniteAbelianGroup::element(std::size_t idx) const {
    if (idx >= order_) throw std::out_of_range("element index out of range");
    Element a(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
        a[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(factors_[i]));
        idx /= static_cast<std::size_t>(factors_[i]);
    }
    return a;
}

std::vector<FiniteAbelianGroup::Element> FiniteAbelianGroup::elements() const {
    std::vector<Element> out;
    out.reserve(order_);
    for (std::size_t i = 0; i < order_; ++i) out.push_back(element(i));
    return out;
}

Phase FiniteAbelianGroup::pairing(const Element& chi, const Element& a) const {
    if (!contains(chi) || !contains(a)) throw std::out_of_range("pairing argument outside the group");
    Phase p;
    for (std::size_t i = 0; i < factors_.size(); ++i) p += Phase(chi[i] * a[i], factors_[i]);
    return p;
}

std::string FiniteAbelianGroup::to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(factors_[i]);
    return s;
}

namespace {

void partitions(std::int64_t n, std::int64_t max_part, std::vector<std::int64_t>& cur,
                std::vector<std::vector<std::int64_t>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (std::int64_t p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<FiniteAbelianGroup> abelian_groups_of_order(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("group order must be positive");
    // primary decomposition: one partition of each prime exponent
    std::vector<std::pair<std::int64_t, std::vector<std::vector<std::int64_t>>>> primes;
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m || m > 1; ++p) {
        if (p * p > m) p = m;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e == 0) continue;
        std::vector<std::vector<std::int64_t>> parts;
        std::vector<std::int64_t> cur;
        partitions(e, e, cur, parts);
        primes.emplace_back(p, std::move(parts));
    }
    std::vector<FiniteAbelianGroup> out;
    std::vector<std::size_t> choice(primes.size(), 0);
    while (true) {
        std::vector<std::int64_t> cyclic;
        for (std::size_t k = 0; k < primes.size(); ++k)
            for (auto e : primes[k].second[choice[k]]) {
                std::int64_t q = 1;
                for (std::int64_t i = 0; i < e; ++i) q *= primes[k].first;
                cyclic.push_back(q);
            }
        out.push_back(FiniteAbelianGroup::from_cyclic(cyclic));
        std::size_t k = 0;
        while (k < primes.size() && ++choice[k] == primes[k].second.size()) choice[k++] = 0;
        if (k == primes.size()) break;
    }
    return out;
}

std::vector<FiniteAbelianGroup> abelian_groups_up_to(std::int64_t n) {
    std::vector<FiniteAbelianGroup> out;
    for (std::int64_t k = 1; k <= n; ++k)
        for (auto& g : abelian_groups_of_order(k)) out.push_back(std::move(g));
    return out;
}

GroupCochain::GroupCochain(FiniteAbelianGroup group, std::vector<Phase> values)
    : group_(std::move(group)), values_(std::move(values)) {
    if (values_.size() != group_.order() * group_.order()) throw std::invalid_argument("cochain table has wrong size");
}

GroupCochain GroupCochain::trivial(const FiniteAbelianGroup& group) {
    return GroupCochain(group, std::vector<Phase>(group.order() * group.order()));
}

GroupCochain GroupCochain::tabulate(
    const FiniteAbelianGroup& group,
    const std::function<Phase(const FiniteAbelianGroup::Element&, const FiniteAbelianGroup::Element&)>& fn) {
    const auto elems = group.elements();
    std::vector<Phase> values;
    values.reserve(elems.size() * elems.size());
    for (const auto& a : elems)
        for (const auto& b : elems) values.push_back(fn(a, b));
    return GroupCochain(group, std::move(values));
}

GroupCochain GroupCochain::bilinear(const FiniteAbelianGroup& group, const std::vector<std::vector<Phase>>& m) {
    const auto r = static_cast<std::size_t>(group.rank());
    if (m.size() != r) throw std::invalid_argument("bilinear form matrix has wrong size");
    for (std::size_t i = 0; i < r; ++i) {
        if (m[i].size() != r) throw std::invalid_argument("bilinear form matrix has wrong size");
        for (std::size_t j = 0; j < r; ++j)
            if (!(m[i][j] * group.factors()[i]).is_zero() || !(m[i][j] * group.factors()[j]).is_zero())
                throw std::invalid_argument("bilinear form is not well defined on the group");
    }
    return tabulate(group, [&](const auto& a, const auto& b) {
        Phase p;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) p += m[i][j] * (a[i] * b[j]);
        return p;
    });
}

GroupCochain GroupCochain::inverse() const {
    std::vector<Phase> v = values_;
    for (auto& p : v) p = -p;
    return GroupCochain(group_, std::move(v));
}

GroupCochain GroupCochain::operator+(const GroupCochain& other) const {
    if (!(group_ == other.group_)) throw std::invalid_argument("cochains on different groups");
    std::vector<Phase> v = values_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    return GroupCochain(group_, std::move(v));
}

GroupCochain GroupCochain::coboundary(const std::vector<Phase>& alpha) const {
    const std::size_t n = group_.order();
    if (alpha.size() != n) throw std::invalid_argument("1-cochain has wrong size");
    std::vector<Phase> v(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            v[a * n + b] = (*this)(a, b) + alpha[a] + alpha[b] - alpha[group_.add_index(a, b)];
    return GroupCochain(group_, std::move(v));
}

GroupCochain GroupCochain::antisymmetrization() const {
    const std::size_t n = group_.order();
    std::vector<Phase> v(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) v[a * n + b] = (*this)(a, b) - (*this)(b, a);
    return GroupCochain(group_, std::move(v));
}

GroupCocycleCheck GroupCochain::check_cocycle() const {
    GroupCocycleCheck result;
    const std::size_t n = group_.order();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Phase defect = (*this)(b, c) - (*this)(group_.add_index(a, b), c) +
                                     (*this)(a, group_.add_index(b, c)) - (*this)(a, b);
                if (!defect.is_zero()) {
                    result.ok = false;
                    result.witness = std::array<std::size_t, 3>{a, b, c};
                    result.defect = defect;
                    return result;
                }
            }
    return result;
}

} // namespace nctorus
