// Python view of the library: exact phases, star products, the lattice
// analysis of a parameter and the property suites.

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nctorus/expr.hpp"
#include "nctorus/io.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/laurent.hpp"
#include "nctorus/qweyl.hpp"
#include "nctorus/verify.hpp"

namespace py = pybind11;
using namespace nctorus;

namespace {

IntMatrix to_int_matrix(const std::vector<std::vector<std::int64_t>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    IntMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n) throw std::invalid_argument("matrix must be square");
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<std::int64_t>> to_rows(const IntMatrix& m) {
    std::vector<std::vector<std::int64_t>> out(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

py::dict analyze(const BilinearCocycle& lambda) {
    const auto h = compute_H_hat(antisymmetrize(lambda), lambda.order());
    const auto q = compute_K_hat(h);
    const auto lk = descend_cocycle(lambda, q);
    py::dict d;
    d["K_hat_invariant_factors"] = q.group.factors();
    std::vector<std::vector<std::int64_t>> cols;
    for (Eigen::Index c = 0; c < h.basis.cols(); ++c) {
        std::vector<std::int64_t> col(h.basis.rows());
        for (Eigen::Index r = 0; r < h.basis.rows(); ++r) col[r] = h.basis(r, c);
        cols.push_back(std::move(col));
    }
    d["H_hat_basis"] = cols;
    d["sharp_bijective"] = sharp_is_bijective(lk);
    return d;
}

std::string verify(const std::string& scope, std::uint64_t seed, const std::string& grid) {
    VerifyOptions opt;
    opt.seed = seed;
    if (grid != "small" && grid != "full") throw std::invalid_argument("grid must be \"small\" or \"full\"");
    opt.grid = grid == "small" ? Grid::small : Grid::full;
    const auto scopes = scope == "all" ? verify_scopes() : std::vector<std::string>{scope};
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : run_suites(scopes, opt)) j.push_back(to_json(r));
    return j.dump();
}

} // namespace

PYBIND11_MODULE(_nctorus, m) {
    m.doc() = "Computer algebra for non-commutative complex tori at roots of unity";

    py::register_exception<ExpressionError>(m, "ExpressionError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<Phase>(m, "Phase")
        .def(py::init<std::int64_t, std::int64_t>(), py::arg("num"), py::arg("den"))
        .def_static("parse", &Phase::parse)
        .def_property_readonly("num", &Phase::num)
        .def_property_readonly("den", &Phase::den)
        .def("embed", &Phase::embed)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def("__hash__", [](const Phase& p) { return std::hash<Phase>{}(p); })
        .def("__str__", &Phase::to_string)
        .def("__repr__", [](const Phase& p) { return "Phase(" + std::to_string(p.num()) + ", " + std::to_string(p.den()) + ")"; });

    py::class_<BilinearCocycle>(m, "BilinearCocycle")
        .def(py::init([](std::int64_t order, const std::vector<std::vector<std::int64_t>>& mat) {
                 return BilinearCocycle(static_cast<int>(mat.size()), order, to_int_matrix(mat));
             }),
             py::arg("order"), py::arg("matrix"))
        .def_property_readonly("dim", &BilinearCocycle::dim)
        .def_property_readonly("order", &BilinearCocycle::order)
        .def_property_readonly("matrix", [](const BilinearCocycle& l) { return to_rows(l.matrix()); })
        .def("__call__", &BilinearCocycle::operator())
        .def("antisymmetrization", [](const BilinearCocycle& l) { return to_rows(antisymmetrize(l)); })
        .def("is_cocycle", [](const BilinearCocycle& l) { return check_cocycle(l).ok; })
        .def("analyze", &analyze);

    py::class_<LaurentPoly>(m, "LaurentPoly")
        .def(py::init([](const std::string& text, int g) { return parse_laurent(text, g); }), py::arg("text"), py::arg("g"))
        .def_property_readonly("dim", &LaurentPoly::dim)
        .def("__len__", &LaurentPoly::size)
        .def("coefficient", [](const LaurentPoly& f, const Exponent& e) { return f.coefficient(e).value(); })
        .def("support", [](const LaurentPoly& f) {
            std::vector<Exponent> out;
            for (const auto& [e, c] : f.terms()) out.push_back(e);
            return out;
        })
        .def("majorant_norm", &majorant_norm, py::arg("weights"))
        .def("__str__", &LaurentPoly::to_string);

    m.def("star_mul", py::overload_cast<const LaurentPoly&, const LaurentPoly&, const BilinearCocycle&>(&star_mul), py::arg("f"),
          py::arg("h"), py::arg("lam"));
    m.def("distance", [](const LaurentPoly& a, const LaurentPoly& b) { return distance(a, b); });

    m.def(
        "qweyl_mul",
        [](const std::string& lhs, const std::string& rhs, const BilinearCocycle& lam, const std::string& side) {
            if (side != "nc" && side != "gerby") throw std::invalid_argument("side must be \"nc\" or \"gerby\"");
            const auto s = side == "gerby" ? CrossedSide::gerby : CrossedSide::nc;
            const auto q = PeriodMatrix::ones(lam.dim());
            return mul_crossed(parse_qpolynomial(lhs, lam, q, s), parse_qpolynomial(rhs, lam, q, s), lam, q, s).to_string(s);
        },
        py::arg("lhs"), py::arg("rhs"), py::arg("lam"), py::arg("side") = "nc");

    m.def("verify_scopes", &verify_scopes);
    m.def("verify", &verify, py::arg("scope") = "all", py::arg("seed") = 7, py::arg("grid") = "small",
          "Run property suites; returns the JSON list of suite reports.");
}
