// nctorus: command-line front end to the library.
//
//   nctorus param analyze --param p.json
//   nctorus star mul  --param p.json "t1 + 2*t2^-1" "t1*t2"
//   nctorus qweyl mul --param p.json --side nc "t1*g2*t1" "t2"
//   nctorus fm demo   --param p.json --B "2,4" --seed 7
//   nctorus verify [all|<scope>] --seed 7 --grid full --json
//
// Exit status: 0 success, 1 a checked property failed, 2 bad usage or input.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nctorus/expr.hpp"
#include "nctorus/finite_fm.hpp"
#include "nctorus/io.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/laurent.hpp"
#include "nctorus/qweyl.hpp"
#include "nctorus/verify.hpp"

using namespace nctorus;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Analysis {
    QuotientData quotient;
    GroupCochain lambda_k;
    SublatticeBasis h;
};

Analysis analyze(const BilinearCocycle& lambda) {
    auto h = compute_H_hat(antisymmetrize(lambda), lambda.order());
    auto q = compute_K_hat(h);
    auto lk = descend_cocycle(lambda, q);
    return {std::move(q), std::move(lk), std::move(h)};
}

int cmd_param_analyze(const std::string& path) {
    const auto param = load_param(path);
    const auto a = analyze(param.lambda);
    json basis = json::array();
    for (Eigen::Index c = 0; c < a.h.basis.cols(); ++c) {
        json col = json::array();
        for (Eigen::Index r = 0; r < a.h.basis.rows(); ++r) col.push_back(a.h.basis(r, c));
        basis.push_back(std::move(col));
    }
    const json report = {{"K_hat_invariant_factors", a.quotient.group.factors()},
                         {"H_hat_basis", std::move(basis)},
                         {"sharp_bijective", sharp_is_bijective(a.lambda_k)}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_star_mul(const std::string& path, const std::string& e1, const std::string& e2) {
    const auto param = load_param(path);
    const int g = param.lambda.dim();
    const auto f = parse_laurent(e1, g), h = parse_laurent(e2, g);
    std::cout << star_mul(f, h, param.lambda).to_string() << '\n';
    return 0;
}

int cmd_qweyl_mul(const std::string& path, const std::string& side_name, const std::string& e1, const std::string& e2) {
    const auto param = load_param(path);
    const CrossedSide side = side_name == "gerby" ? CrossedSide::gerby : CrossedSide::nc;
    const PeriodMatrix q = param.q ? *param.q : PeriodMatrix::ones(param.lambda.dim());
    const auto f = parse_qpolynomial(e1, param.lambda, q, side);
    const auto h = parse_qpolynomial(e2, param.lambda, q, side);
    std::cout << mul_crossed(f, h, param.lambda, q, side).to_string(side) << '\n';
    return 0;
}

std::vector<std::int64_t> parse_factors(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw UsageError("--B: \"" + item + "\" is not an integer");
        }
        if (used != item.size() || v < 1) throw UsageError("--B: \"" + item + "\" is not a positive integer");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--B needs at least one invariant factor");
    return out;
}

void print_report(const std::vector<SuiteReport>& suites, const json& header, bool as_json) {
    bool ok = true;
    for (const auto& s : suites) ok = ok && s.ok();
    if (as_json) {
        json j = header;
        j["ok"] = ok;
        j["suites"] = json::array();
        for (const auto& s : suites) j["suites"].push_back(to_json(s));
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& s : suites)
            for (const auto& p : s.properties) {
                std::ostringstream dev;
                dev.precision(3);
                dev << std::scientific << p.max_deviation;
                std::cout << (p.ok ? "ok    " : "FAIL  ") << s.scope << '/' << p.name << "  cases=" << p.cases << "  max_dev=" << dev.str()
                          << '\n';
            }
        std::cout << (ok ? "all properties hold" : "some properties failed") << '\n';
    }
    for (const auto& s : suites)
        for (const auto& p : s.properties)
            if (!p.ok) std::cerr << "witness " << s.scope << '/' << p.name << ": " << p.witness << '\n';
}

int cmd_fm_demo(const std::string& path, const std::string& b_text, std::uint64_t seed, int pairs, bool as_json) {
    const auto param = load_param(path);
    const auto a = analyze(param.lambda);
    const FiniteAbelianGroup b(parse_factors(b_text));
    if (!find_embedding(a.quotient.group, b))
        throw UsageError("Khat = " + a.quotient.group.to_string() + " does not embed in B = " + b.to_string());
    const TorusModel model(b, a.quotient.group, a.lambda_k);
    std::optional<DualPairData> dp;
    if (sharp_is_bijective(a.lambda_k)) dp = lambda_sharp(a.lambda_k);
    const auto rep = fm_demo(model, dp ? &*dp : nullptr, seed, pairs);
    json emb = json::array();
    for (int i = 0; i < model.k_hat().rank(); ++i) emb.push_back(model.b_hat().element(model.embed(model.k_hat().index(model.k_hat().generator(i)))));
    const json header = {{"seed", seed},
                         {"model", {{"B", b.factors()}, {"K_hat", model.k_hat().factors()}, {"embedding", emb}, {"lambda_K", to_json(a.lambda_k)}}}};
    print_report({rep}, header, as_json);
    return rep.ok() ? 0 : 1;
}

int cmd_verify(std::string scope, std::uint64_t seed, const std::string& grid, const std::string& phi_path, bool as_json) {
    VerifyOptions opt;
    opt.seed = seed;
    opt.grid = grid == "small" ? Grid::small : Grid::full;
    if (!phi_path.empty()) opt.phi = load_phi(phi_path);
    std::vector<std::string> scopes;
    if (scope == "all") scopes = verify_scopes();
    else {
        const auto& known = verify_scopes();
        if (std::find(known.begin(), known.end(), scope) == known.end()) throw UsageError("unknown scope \"" + scope + "\"");
        scopes = {scope};
    }
    const auto suites = run_suites(scopes, opt);
    json header = {{"seed", seed}, {"grid", grid}, {"scope", scope}};
    if (opt.phi) header["phi"] = to_json(*opt.phi);
    print_report(suites, header, as_json);
    for (const auto& s : suites)
        if (!s.ok()) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Computer algebra for non-commutative complex tori at roots of unity"};
    app.require_subcommand(1);

    std::string param_path, side = "nc", e1, e2, b_text = "4", grid = "full", phi_path, scope_pos, scope_opt;
    std::uint64_t seed = 7;
    int pairs = 20;
    bool as_json = false;

    auto* param = app.add_subcommand("param", "parameter files");
    param->require_subcommand(1);
    auto* analyze_cmd = param->add_subcommand("analyze", "radical, finite quotient and sharp map of the parameter");
    analyze_cmd->add_option("--param", param_path, "parameter file")->required();

    auto* star = app.add_subcommand("star", "deformed Laurent polynomials");
    star->require_subcommand(1);
    auto* star_mul_cmd = star->add_subcommand("mul", "star product of two Laurent polynomials");
    star_mul_cmd->add_option("--param", param_path, "parameter file")->required();
    star_mul_cmd->add_option("lhs", e1)->required();
    star_mul_cmd->add_option("rhs", e2)->required();

    auto* qweyl = app.add_subcommand("qweyl", "q-Weyl algebra and its crossed products");
    qweyl->require_subcommand(1);
    auto* qweyl_mul_cmd = qweyl->add_subcommand("mul", "product in a crossed product, in normal form");
    qweyl_mul_cmd->add_option("--param", param_path, "parameter file")->required();
    qweyl_mul_cmd->add_option("--side", side, "nc or gerby")->check(CLI::IsMember({"nc", "gerby"}));
    qweyl_mul_cmd->add_option("lhs", e1)->required();
    qweyl_mul_cmd->add_option("rhs", e2)->required();

    auto* fm = app.add_subcommand("fm", "finite Fourier-Mukai models");
    fm->require_subcommand(1);
    auto* demo = fm->add_subcommand("demo", "run every transform check on one model");
    demo->add_option("--param", param_path, "parameter file")->required();
    demo->add_option("--B", b_text, "invariant factors of B, comma separated");
    demo->add_option("--seed", seed);
    demo->add_option("--pairs", pairs, "random object pairs")->check(CLI::Range(1, 1000));
    demo->add_flag("--json", as_json);

    auto* verify = app.add_subcommand("verify", "property suites");
    verify->add_option("suite", scope_pos, "all or one suite");
    verify->add_option("--scope", scope_opt, "all or one suite");
    verify->add_option("--seed", seed);
    verify->add_option("--grid", grid)->check(CLI::IsMember({"small", "full"}));
    verify->add_option("--phi", phi_path, "twisted-equivariant suite uses this cocycle table");
    verify->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze_cmd) return cmd_param_analyze(param_path);
        if (*star_mul_cmd) return cmd_star_mul(param_path, e1, e2);
        if (*qweyl_mul_cmd) return cmd_qweyl_mul(param_path, side, e1, e2);
        if (*demo) return cmd_fm_demo(param_path, b_text, seed, pairs, as_json);
        if (*verify) {
            if (!scope_pos.empty() && !scope_opt.empty() && scope_pos != scope_opt)
                throw UsageError("scope given twice: \"" + scope_pos + "\" and \"" + scope_opt + "\"");
            std::string scope = !scope_opt.empty() ? scope_opt : !scope_pos.empty() ? scope_pos : "all";
            return cmd_verify(scope, seed, grid, phi_path, as_json);
        }
    } catch (const InputError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const ExpressionError& e) {
        std::cerr << "expression: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
