#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

#include "nctorus/exponent.hpp"
#include "nctorus/intmat.hpp"
#include "nctorus/phase.hpp"

namespace nctorus {

/// Raised when a windowed cochain is evaluated outside its window.
class OutOfWindow : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/**
 * Bilinear 2-cocycle on Z^g with values in mu_N:
 *   lambda(s, t) = zeta_N^{s^T M t}.
 * Entries of M are kept reduced to [0, N).
 */
class BilinearCocycle {
public:
    BilinearCocycle(int g, std::int64_t order, IntMatrix matrix);
    static BilinearCocycle trivial(int g, std::int64_t order = 1);

    int dim() const noexcept { return g_; }
    std::int64_t order() const noexcept { return order_; }
    const IntMatrix& matrix() const noexcept { return matrix_; }

    Phase operator()(const Exponent& s, const Exponent& t) const;

    friend bool operator==(const BilinearCocycle& a, const BilinearCocycle& b) {
        return a.g_ == b.g_ && a.order_ == b.order_ && a.matrix_ == b.matrix_;
    }

private:
    int g_;
    std::int64_t order_;
    IntMatrix matrix_;
};

/// A general 2-cochain Z^g x Z^g -> Q/Z. Evaluation may throw OutOfWindow.
class Cochain2 {
public:
    using Fn = std::function<Phase(const Exponent&, const Exponent&)>;

    Cochain2(int g, Fn fn) : g_(g), fn_(std::move(fn)) {}
    Cochain2(const BilinearCocycle& lambda);

    int dim() const noexcept { return g_; }
    Phase operator()(const Exponent& s, const Exponent& t) const;

private:
    int g_;
    Fn fn_;
};

/// A 1-cochain alpha: Z^g -> Q/Z tabulated on a finite window.
class CochainTable {
public:
    CochainTable(Box window, std::map<Exponent, Phase> values);
    static CochainTable tabulate(const Box& window, const std::function<Phase(const Exponent&)>& fn);
    static CochainTable trivial(const Box& window);

    const Box& window() const noexcept { return window_; }
    int dim() const noexcept { return window_.dim(); }
    Phase operator()(const Exponent& t) const;
    /// Pointwise negation (alpha^{-1}).
    CochainTable inverse() const;

private:
    Box window_;
    std::map<Exponent, Phase> values_;
};

struct CocycleCheck {
    bool ok = true;
    std::size_t triples_checked = 0;
    /// First (t1, t2, t3) with a nonzero defect.
    std::optional<std::array<Exponent, 3>> witness;
    Phase defect;
};

/// Checks lambda(t2,t3) - lambda(t1+t2,t3) + lambda(t1,t2+t3) - lambda(t1,t2) == 0
/// for every triple of the window whose four evaluations are defined.
/// Throws std::invalid_argument if no triple can be evaluated.
CocycleCheck check_cocycle(const Cochain2& lambda, const Box& window);

/// Symbolic check for a bilinear cochain: by bilinearity the identity reduces
/// to basis vectors, which are enumerated exactly.
CocycleCheck check_cocycle(const BilinearCocycle& lambda);

/// A = M - M^T mod N: exponent matrix of Lambda(s ^ t) = lambda(s,t) lambda(t,s)^{-1}.
IntMatrix antisymmetrize(const BilinearCocycle& lambda);

/// lambda'(s,t) = lambda(s,t) alpha(s) alpha(t) alpha(s+t)^{-1}.
Cochain2 coboundary(const CochainTable& alpha, const Cochain2& lambda);

/// alpha(t) = zeta_{2N}^{t^T S t - sum_i S_ii t_i} on the window; its coboundary is
/// zeta_N^{-s^T S t}. S must be symmetric.
CochainTable bounding_cochain(const IntMatrix& symmetric, std::int64_t order, const Box& window);

/// True iff the two cocycles have equal antisymmetrization (complete invariant).
bool cohomologous(const BilinearCocycle& a, const BilinearCocycle& b);

/// An explicit alpha with coboundary(alpha, a) == b on the window, when one exists.
std::optional<CochainTable> cohomology_witness(const BilinearCocycle& a, const BilinearCocycle& b, const Box& window);

} // namespace nctorus
