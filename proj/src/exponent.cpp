#include "nctorus/exponent.hpp"

#include <stdexcept>

namespace nctorus {

namespace {
void require_same_dim(const Exponent& a, const Exponent& b) {
    if (a.size() != b.size()) throw std::invalid_argument("exponent dimension mismatch");
}
} // namespace

Exponent operator+(const Exponent& a, const Exponent& b) {
    require_same_dim(a, b);
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Exponent operator-(const Exponent& a, const Exponent& b) {
    require_same_dim(a, b);
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Exponent operator-(const Exponent& a) {
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

Exponent unit_vector(int g, int i) {
    Exponent e(static_cast<std::size_t>(g), 0);
    e.at(static_cast<std::size_t>(i)) = 1;
    return e;
}

std::string to_string(const Exponent& e) {
    std::string s = "(";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e[i]);
    }
    return s + ")";
}

Box::Box(Exponent lo, Exponent hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    require_same_dim(lo_, hi_);
    for (std::size_t i = 0; i < lo_.size(); ++i)
        if (lo_[i] > hi_[i]) throw std::invalid_argument("empty box");
}

Box Box::cube(int g, std::int64_t r) {
    return Box(Exponent(static_cast<std::size_t>(g), -r), Exponent(static_cast<std::size_t>(g), r));
}

bool Box::contains(const Exponent& t) const {
    if (t.size() != lo_.size()) return false;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] < lo_[i] || t[i] > hi_[i]) return false;
    return true;
}

std::size_t Box::size() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) n *= static_cast<std::size_t>(hi_[i] - lo_[i] + 1);
    return n;
}

std::vector<Exponent> Box::points() const {
    std::vector<Exponent> out;
    out.reserve(size());
    Exponent cur = lo_;
    const int g = dim();
    while (true) {
        out.push_back(cur);
        int i = g - 1;
        while (i >= 0 && cur[i] == hi_[i]) {
            cur[i] = lo_[i];
            --i;
        }
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

} // namespace nctorus
