#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ckballs/matrix_core.hpp"
#include "ckballs/nonsmooth.hpp"
#include "ckballs/oracle.hpp"
#include "ckballs/schur_ideal.hpp"
#include "ckballs/vnn.hpp"

namespace ckballs {

/// Emit-only JSON tree with insertion-ordered object keys and floats printed
/// with 17 significant digits, so seeded runs are reproducible byte for byte.
class JsonOut {
public:
    static JsonOut null();
    static JsonOut boolean(bool b);
    static JsonOut integer(long long v);
    static JsonOut number(double v);
    static JsonOut str(std::string s);
    static JsonOut array();
    static JsonOut object();

    JsonOut& push(JsonOut element);                 // array
    JsonOut& set(const std::string& key, JsonOut);  // object

    std::string dump(int indent = -1) const;

private:
    enum class Kind { null_v, bool_v, int_v, num_v, str_v, arr_v, obj_v };
    Kind kind_ = Kind::null_v;
    bool bool_ = false;
    long long int_ = 0;
    double num_ = 0.0;
    std::string str_;
    std::vector<JsonOut> elements_;
    std::vector<std::pair<std::string, JsonOut>> members_;

    void dump_to(std::string& out, int indent, int depth) const;
};

std::string format_double(double v);

JsonOut complex_json(cplx z);
JsonOut point_json(const PointCk& p);
JsonOut matrix_json(const ComplexMatrix& m);
JsonOut hermitian_json(const HermitianMatrix& m);
JsonOut certificate_json(const SeparationCertificate& cert);
JsonOut ideal_json(const SchurIdealGens& ideal);
JsonOut envelope_json(const EnvelopeModel& model);
JsonOut tuple_json(const CommutingTuple& t);
JsonOut poly_json(const Poly& p);

// --- parsing (backed by nlohmann::json; throws std::invalid_argument with a
// descriptive message on malformed input) ---

cplx parse_complex_text(const std::string& json_text);
PointCk parse_point_text(const std::string& json_text);

struct MemberInput {
    // pick
    std::optional<std::vector<cplx>> alpha;
    // perp / biperp / idempotent / example24
    std::optional<std::vector<HermitianMatrix>> generators;
    std::optional<std::vector<PointCk>> D;
    std::optional<HermitianMatrix> Q;
    std::optional<PointCk> w;
    std::optional<double> tol;
};

MemberInput parse_member_input(const std::string& json_text);

struct GenerateConfig {
    // envelope
    int N = 8;
    double a0 = 1.0;
    double c0 = 1.0;
    double jump_min = 1e-6;
    int samples = 512;
    // sample clouds
    std::vector<PointCk> D;
    int rounds = 3;
    int per_round = 32;
    int max_degree = 6;
    int n_polys = 200;
    int grid = 64;
};

GenerateConfig parse_generate_config(const std::string& json_text);
CommutingTuple parse_tuple(const std::string& json_text);
Poly parse_poly(const std::string& json_text);
EnvelopeModel parse_envelope(const std::string& json_text);
std::vector<PointCk> parse_point_list(const std::string& json_text);
ComplexMatrix parse_matrix_text(const std::string& json_text);

std::string read_text_file(const std::string& path);
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace ckballs
