#include "ckballs/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ckballs {

using nlohmann::json;

JsonOut JsonOut::null() { return JsonOut{}; }
JsonOut JsonOut::boolean(bool b) {
    JsonOut j;
    j.kind_ = Kind::bool_v;
    j.bool_ = b;
    return j;
}
JsonOut JsonOut::integer(long long v) {
    JsonOut j;
    j.kind_ = Kind::int_v;
    j.int_ = v;
    return j;
}
JsonOut JsonOut::number(double v) {
    JsonOut j;
    j.kind_ = Kind::num_v;
    j.num_ = v;
    return j;
}
JsonOut JsonOut::str(std::string s) {
    JsonOut j;
    j.kind_ = Kind::str_v;
    j.str_ = std::move(s);
    return j;
}
JsonOut JsonOut::array() {
    JsonOut j;
    j.kind_ = Kind::arr_v;
    return j;
}
JsonOut JsonOut::object() {
    JsonOut j;
    j.kind_ = Kind::obj_v;
    return j;
}

JsonOut& JsonOut::push(JsonOut element) {
    if (kind_ != Kind::arr_v) throw std::logic_error("JsonOut: push on non-array");
    elements_.push_back(std::move(element));
    return *this;
}

JsonOut& JsonOut::set(const std::string& key, JsonOut value) {
    if (kind_ != Kind::obj_v) throw std::logic_error("JsonOut: set on non-object");
    members_.emplace_back(key, std::move(value));
    return *this;
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0.0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}

}  // namespace

void JsonOut::dump_to(std::string& out, int indent, int depth) const {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (!pretty) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent) * d, ' ');
    };
    switch (kind_) {
        case Kind::null_v: out += "null"; break;
        case Kind::bool_v: out += bool_ ? "true" : "false"; break;
        case Kind::int_v: out += std::to_string(int_); break;
        case Kind::num_v: out += format_double(num_); break;
        case Kind::str_v: escape_string(str_, out); break;
        case Kind::arr_v: {
            out += '[';
            for (std::size_t i = 0; i < elements_.size(); ++i) {
                if (i) out += ',';
                newline(depth + 1);
                elements_[i].dump_to(out, indent, depth + 1);
            }
            if (!elements_.empty()) newline(depth);
            out += ']';
            break;
        }
        case Kind::obj_v: {
            out += '{';
            for (std::size_t i = 0; i < members_.size(); ++i) {
                if (i) out += ',';
                newline(depth + 1);
                escape_string(members_[i].first, out);
                out += pretty ? ": " : ":";
                members_[i].second.dump_to(out, indent, depth + 1);
            }
            if (!members_.empty()) newline(depth);
            out += '}';
            break;
        }
    }
}

std::string JsonOut::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

JsonOut complex_json(cplx z) {
    return JsonOut::array().push(JsonOut::number(z.real())).push(JsonOut::number(z.imag()));
}

JsonOut point_json(const PointCk& p) {
    JsonOut arr = JsonOut::array();
    for (const auto& c : p) arr.push(complex_json(c));
    return arr;
}

JsonOut matrix_json(const ComplexMatrix& m) {
    JsonOut rows = JsonOut::array();
    for (int i = 0; i < m.rows(); ++i) {
        JsonOut row = JsonOut::array();
        for (int j = 0; j < m.cols(); ++j) row.push(complex_json(m(i, j)));
        rows.push(std::move(row));
    }
    return rows;
}

JsonOut hermitian_json(const HermitianMatrix& m) { return matrix_json(m.matrix()); }

JsonOut certificate_json(const SeparationCertificate& cert) {
    return JsonOut::object()
        .set("P", hermitian_json(cert.P))
        .set("epsilon", JsonOut::number(cert.epsilon))
        .set("margin", JsonOut::number(cert.margin));
}

JsonOut ideal_json(const SchurIdealGens& ideal) {
    JsonOut gens = JsonOut::array();
    for (const auto& g : ideal.gens) gens.push(hermitian_json(g));
    return JsonOut::object()
        .set("k", JsonOut::integer(ideal.k))
        .set("generators", std::move(gens))
        .set("delta", JsonOut::number(ideal.delta))
        .set("nontrivial", JsonOut::boolean(ideal.nontrivial));
}

JsonOut envelope_json(const EnvelopeModel& model) {
    JsonOut curves = JsonOut::array();
    for (const auto& c : model.curves)
        curves.push(JsonOut::object()
                        .set("a", JsonOut::number(c.a))
                        .set("c", JsonOut::number(c.c)));
    JsonOut bps = JsonOut::array();
    for (double b : model.breakpoints) bps.push(JsonOut::number(b));
    JsonOut jumps = JsonOut::array();
    for (double j : model.corner_jumps) jumps.push(JsonOut::number(j));
    return JsonOut::object()
        .set("curves", std::move(curves))
        .set("breakpoints", std::move(bps))
        .set("corner_jumps", std::move(jumps))
        .set("mu_limit", JsonOut::number(model.mu_limit))
        .set("jump_min", JsonOut::number(model.jump_min));
}

JsonOut tuple_json(const CommutingTuple& t) {
    JsonOut out = JsonOut::object()
                      .set("n", JsonOut::integer(t.n()))
                      .set("dim", JsonOut::integer(t.dim()));
    if (t.is_diagonalizable_form()) {
        out.set("Q", matrix_json(t.q()));
        JsonOut diags = JsonOut::array();
        for (const auto& d : t.diagonals()) diags.push(point_json(d));
        out.set("diagonals", std::move(diags));
    } else {
        JsonOut mats = JsonOut::array();
        for (const auto& m : t.matrices()) mats.push(matrix_json(m));
        out.set("matrices", std::move(mats));
    }
    return out;
}

JsonOut poly_json(const Poly& p) {
    JsonOut terms = JsonOut::array();
    for (const auto& [exp, coef] : p.terms) {
        JsonOut e = JsonOut::array();
        for (int v : exp) e.push(JsonOut::integer(v));
        terms.push(JsonOut::object().set("exp", std::move(e)).set("coef", complex_json(coef)));
    }
    return JsonOut::object().set("n", JsonOut::integer(p.n)).set("terms", std::move(terms));
}

// ---------------------------------------------------------------------------
// parsing

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("input: " + what); }

json parse_or_throw(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad("malformed JSON");
    return j;
}

cplx get_complex(const json& j) {
    if (j.is_number()) return cplx{j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad("complex scalar must be [re, im]");
    return cplx{j[0].get<double>(), j[1].get<double>()};
}

PointCk get_point(const json& j) {
    if (!j.is_array() || j.empty()) bad("point must be a non-empty array");
    PointCk p;
    for (const auto& c : j) p.push_back(get_complex(c));
    return p;
}

ComplexMatrix get_matrix(const json& j) {
    if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) bad("matrix rows have unequal length");
        for (int c = 0; c < cols; ++c) m(i, c) = get_complex(j[i][c]);
    }
    return m;
}

}  // namespace

cplx parse_complex_text(const std::string& text) { return get_complex(parse_or_throw(text)); }

PointCk parse_point_text(const std::string& text) { return get_point(parse_or_throw(text)); }

ComplexMatrix parse_matrix_text(const std::string& text) {
    return get_matrix(parse_or_throw(text));
}

MemberInput parse_member_input(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object()) bad("member input must be an object");
    MemberInput in;
    if (j.contains("alpha")) {
        std::vector<cplx> alpha;
        for (const auto& a : j["alpha"]) alpha.push_back(get_complex(a));
        in.alpha = std::move(alpha);
    }
    if (j.contains("generators")) {
        std::vector<HermitianMatrix> gens;
        for (const auto& g : j["generators"]) gens.emplace_back(get_matrix(g));
        in.generators = std::move(gens);
    }
    if (j.contains("D")) {
        std::vector<PointCk> d;
        for (const auto& p : j["D"]) d.push_back(get_point(p));
        in.D = std::move(d);
    }
    if (j.contains("Q")) in.Q = HermitianMatrix(get_matrix(j["Q"]));
    if (j.contains("w")) in.w = get_point(j["w"]);
    if (j.contains("tol")) {
        if (!j["tol"].is_number()) bad("tol must be a number");
        in.tol = j["tol"].get<double>();
    }
    return in;
}

GenerateConfig parse_generate_config(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object()) bad("generate config must be an object");
    GenerateConfig cfg;
    if (j.contains("N")) cfg.N = j["N"].get<int>();
    if (j.contains("a0")) cfg.a0 = j["a0"].get<double>();
    if (j.contains("c0")) cfg.c0 = j["c0"].get<double>();
    if (j.contains("jump_min")) cfg.jump_min = j["jump_min"].get<double>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("D"))
        for (const auto& p : j["D"]) cfg.D.push_back(get_point(p));
    if (j.contains("rounds")) cfg.rounds = j["rounds"].get<int>();
    if (j.contains("per_round")) cfg.per_round = j["per_round"].get<int>();
    if (j.contains("max_degree")) cfg.max_degree = j["max_degree"].get<int>();
    if (j.contains("n_polys")) cfg.n_polys = j["n_polys"].get<int>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
    if (cfg.samples < 1) bad("samples must be >= 1");
    return cfg;
}

CommutingTuple parse_tuple(const std::string& text) {
    json j = parse_or_throw(text);
    if (j.is_object() && j.contains("tuple")) j = j["tuple"];  // accept search output
    if (!j.is_object()) bad("tuple must be an object");
    if (j.contains("matrices")) {
        std::vector<ComplexMatrix> mats;
        for (const auto& m : j["matrices"]) mats.push_back(get_matrix(m));
        return CommutingTuple::general(std::move(mats));
    }
    if (!j.contains("Q") || !j.contains("diagonals"))
        bad("tuple needs either matrices or Q + diagonals");
    std::vector<std::vector<cplx>> diags;
    for (const auto& d : j["diagonals"]) diags.push_back(get_point(d));
    return CommutingTuple::diagonalizable(get_matrix(j["Q"]), std::move(diags));
}

Poly parse_poly(const std::string& text) {
    json j = parse_or_throw(text);
    if (j.is_object() && j.contains("poly")) j = j["poly"];  // accept search output
    if (!j.is_object() || !j.contains("n") || !j.contains("terms")) bad("poly needs n and terms");
    Poly p;
    p.n = j["n"].get<int>();
    if (p.n < 1) bad("poly needs n >= 1");
    for (const auto& t : j["terms"]) {
        if (!t.contains("exp") || !t.contains("coef")) bad("poly term needs exp and coef");
        std::vector<int> exp;
        for (const auto& e : t["exp"]) {
            const int v = e.get<int>();
            if (v < 0) bad("poly exponent must be nonnegative");
            exp.push_back(v);
        }
        if (static_cast<int>(exp.size()) != p.n) bad("poly exponent arity mismatch");
        p.terms[exp] += get_complex(t["coef"]);
    }
    return p;
}

EnvelopeModel parse_envelope(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object() || !j.contains("curves")) bad("envelope needs curves");
    EnvelopeModel model;
    for (const auto& c : j["curves"])
        model.curves.push_back({c.at("a").get<double>(), c.at("c").get<double>()});
    if (j.contains("breakpoints"))
        for (const auto& b : j["breakpoints"]) model.breakpoints.push_back(b.get<double>());
    if (j.contains("corner_jumps"))
        for (const auto& b : j["corner_jumps"]) model.corner_jumps.push_back(b.get<double>());
    if (j.contains("mu_limit")) model.mu_limit = j["mu_limit"].get<double>();
    if (j.contains("jump_min")) model.jump_min = j["jump_min"].get<double>();
    return model;
}

std::vector<PointCk> parse_point_list(const std::string& text) {
    json j = parse_or_throw(text);
    if (j.is_object() && j.contains("points")) j = j["points"];
    if (j.is_object() && j.contains("D")) j = j["D"];
    if (!j.is_array()) bad("expected an array of points");
    std::vector<PointCk> out;
    for (const auto& p : j) out.push_back(get_point(p));
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

}  // namespace ckballs
