#include "nctorus/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace nctorus {

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Character iterator that reports how far the parser has read.
struct CountingIterator {
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* p;
    std::size_t* consumed;

    reference operator*() const { return *p; }
    CountingIterator& operator++() {
        ++p;
        ++*consumed;
        return *this;
    }
    CountingIterator operator++(int) {
        auto old = *this;
        ++*this;
        return old;
    }
    friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p == b.p; }
};

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

// One open container while parsing: its pointer and the next array slot.
struct Frame {
    std::string pointer;
    bool is_array;
    std::size_t next = 0;
    std::string key;
};

} // namespace

InputError::InputError(const std::string& origin, std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}

LocatedJson::LocatedJson(std::string_view text, std::string origin) : origin_(std::move(origin)) {
    std::size_t consumed = 0;
    std::vector<Frame> stack;
    const auto record = [&](const std::string& ptr) {
        // the lexer has read one character past the token start at most; good enough for a line/column hint
        where_.try_emplace(ptr, line_column(text, consumed == 0 ? 0 : consumed - 1));
    };
    const auto child = [&]() -> std::string {
        if (stack.empty()) return "";
        Frame& f = stack.back();
        if (f.is_array) return f.pointer + "/" + std::to_string(f.next++);
        return f.pointer + "/" + escape_token(f.key);
    };
    nlohmann::json::parser_callback_t cb = [&](int, nlohmann::json::parse_event_t ev, nlohmann::json& parsed) {
        using E = nlohmann::json::parse_event_t;
        switch (ev) {
        case E::object_start:
        case E::array_start: {
            const std::string ptr = child();
            record(ptr);
            stack.push_back({ptr, ev == E::array_start, 0, {}});
            break;
        }
        case E::key:
            if (!stack.empty()) stack.back().key = parsed.get<std::string>();
            break;
        case E::value: {
            const bool container = parsed.is_object() || parsed.is_array();
            if (!container) record(child());
            break;
        }
        case E::object_end:
        case E::array_end:
            if (!stack.empty()) stack.pop_back();
            break;
        }
        return true;
    };
    CountingIterator first{text.data(), &consumed};
    CountingIterator last{text.data() + text.size(), &consumed};
    try {
        root_ = nlohmann::json::parse(first, last, cb);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        // drop the library's "[json.exception.parse_error.101] parse error at line x, column y: " prefix
        if (const auto cut = msg.find(": "); cut != std::string::npos) msg = msg.substr(cut + 2);
        throw InputError(origin_, line, col, "malformed JSON: " + msg);
    }
}

void LocatedJson::fail(const std::string& pointer, const std::string& msg) const {
    std::string p = pointer;
    for (;;) {
        if (auto it = where_.find(p); it != where_.end()) throw InputError(origin_, it->second.first, it->second.second, msg);
        if (p.empty()) break;
        p = p.substr(0, p.rfind('/'));
    }
    throw InputError(origin_, 1, 1, msg);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::int64_t need_int(const LocatedJson& doc, const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_number_integer()) doc.fail(ptr, "expected an integer");
    return j.get<std::int64_t>();
}

Complex need_complex(const LocatedJson& doc, const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) doc.fail(ptr, "expected a complex number [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Phase need_phase(const LocatedJson& doc, const nlohmann::json& j, const std::string& ptr) {
    try {
        return phase_from_json(j);
    } catch (const std::exception& e) {
        doc.fail(ptr, std::string("expected a phase \"p/q\": ") + e.what());
    }
}

} // namespace

ParamFile parse_param(std::string_view text, const std::string& origin) {
    const LocatedJson doc(text, origin);
    const auto& r = doc.root();
    if (!r.is_object()) doc.fail("", "parameter file must be a JSON object");
    for (const char* key : {"g", "N", "M"})
        if (!r.contains(key)) doc.fail("", std::string("missing key \"") + key + "\"");
    for (const auto& [key, _] : r.items())
        if (key != "g" && key != "N" && key != "M" && key != "Q") doc.fail("/" + escape_token(key), "unknown key \"" + key + "\"");
    const std::int64_t g = need_int(doc, r["g"], "/g");
    const std::int64_t n = need_int(doc, r["N"], "/N");
    if (g < 1 || g > 16) doc.fail("/g", "g must lie in 1..16");
    if (n < 1) doc.fail("/N", "N must be positive");
    const auto& m = r["M"];
    if (!m.is_array() || static_cast<std::int64_t>(m.size()) != g) doc.fail("/M", "M must be a " + std::to_string(g) + "x" + std::to_string(g) + " array");
    IntMatrix mat(g, g);
    for (std::int64_t i = 0; i < g; ++i) {
        const std::string row = "/M/" + std::to_string(i);
        if (!m[i].is_array() || static_cast<std::int64_t>(m[i].size()) != g) doc.fail(row, "row must have " + std::to_string(g) + " entries");
        for (std::int64_t j = 0; j < g; ++j) mat(i, j) = need_int(doc, m[i][j], row + "/" + std::to_string(j));
    }
    ParamFile out{BilinearCocycle(static_cast<int>(g), n, mat), std::nullopt};
    if (r.contains("Q")) {
        const auto& q = r["Q"];
        if (!q.is_array() || static_cast<std::int64_t>(q.size()) != g) doc.fail("/Q", "Q must be a " + std::to_string(g) + "x" + std::to_string(g) + " array");
        Eigen::MatrixXcd qm(g, g);
        for (std::int64_t i = 0; i < g; ++i) {
            const std::string row = "/Q/" + std::to_string(i);
            if (!q[i].is_array() || static_cast<std::int64_t>(q[i].size()) != g) doc.fail(row, "row must have " + std::to_string(g) + " entries");
            for (std::int64_t j = 0; j < g; ++j) {
                const std::string at = row + "/" + std::to_string(j);
                qm(i, j) = need_complex(doc, q[i][j], at);
                if (qm(i, j) == Complex(0.0)) doc.fail(at, "period matrix entries must be nonzero");
            }
        }
        out.q = PeriodMatrix(qm);
    }
    return out;
}

ParamFile load_param(const std::string& path) { return parse_param(read_file(path), path); }

GroupCochain parse_phi(std::string_view text, const std::string& origin) {
    const LocatedJson doc(text, origin);
    const auto& r = doc.root();
    if (!r.is_object() || !r.contains("group") || !r.contains("phi")) doc.fail("", "expected an object with \"group\" and \"phi\"");
    const auto& gr = r["group"];
    if (!gr.is_array()) doc.fail("/group", "group must list invariant factors");
    std::vector<std::int64_t> factors;
    for (std::size_t i = 0; i < gr.size(); ++i) factors.push_back(need_int(doc, gr[i], "/group/" + std::to_string(i)));
    std::optional<FiniteAbelianGroup> group;
    try {
        group.emplace(factors);
    } catch (const std::exception& e) {
        doc.fail("/group", e.what());
    }
    const std::size_t n = group->order();
    const auto& t = r["phi"];
    if (!t.is_array() || t.size() != n) doc.fail("/phi", "phi must be a " + std::to_string(n) + "x" + std::to_string(n) + " table");
    std::vector<Phase> values;
    values.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const std::string row = "/phi/" + std::to_string(a);
        if (!t[a].is_array() || t[a].size() != n) doc.fail(row, "row must have " + std::to_string(n) + " entries");
        for (std::size_t b = 0; b < n; ++b) values.push_back(need_phase(doc, t[a][b], row + "/" + std::to_string(b)));
    }
    return GroupCochain(*group, std::move(values));
}

GroupCochain load_phi(const std::string& path) { return parse_phi(read_file(path), path); }

nlohmann::json to_json(const Phase& p) { return p.to_string(); }

nlohmann::json to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

nlohmann::json to_json(const CMatrix& m) {
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(Complex(m(i, j))));
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::json to_json(const IntMatrix& m) {
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::json to_json(const GroupCochain& phi) {
    const std::size_t n = phi.group().order();
    auto table = nlohmann::json::array();
    for (std::size_t a = 0; a < n; ++a) {
        auto row = nlohmann::json::array();
        for (std::size_t b = 0; b < n; ++b) row.push_back(to_json(phi(a, b)));
        table.push_back(std::move(row));
    }
    return {{"group", phi.group().factors()}, {"phi", std::move(table)}};
}

nlohmann::json to_json(const EquivariantObject& obj) {
    auto rho = nlohmann::json::array();
    for (const auto& blocks : obj.rho) {
        auto per_point = nlohmann::json::array();
        for (const auto& b : blocks) per_point.push_back(to_json(b));
        rho.push_back(std::move(per_point));
    }
    return {{"dims", obj.dims}, {"rho", std::move(rho)}};
}

Phase phase_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Phase::parse(j.get<std::string>());
    if (j.is_number_integer()) return Phase(j.get<std::int64_t>(), 1);
    throw std::invalid_argument("not a phase");
}

Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace nctorus
