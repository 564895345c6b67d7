#include "ckballs/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "ckballs/generated_balls.hpp"
#include "ckballs/json_io.hpp"
#include "ckballs/mobius_pick.hpp"
#include "ckballs/nonsmooth.hpp"
#include "ckballs/schur_ideal.hpp"
#include "ckballs/vnn.hpp"

namespace ckballs::cli {

namespace {

namespace fs = std::filesystem;

std::string cloud_csv(const SampleCloud& cloud) {
    std::ostringstream os;
    for (int i = 0; i < cloud.k; ++i) {
        if (i) os << ',';
        os << "re_" << (i + 1) << ",im_" << (i + 1);
    }
    os << '\n';
    for (const auto& p : cloud.points) {
        for (int i = 0; i < cloud.k; ++i) {
            if (i) os << ',';
            os << format_double(p[i].real()) << ',' << format_double(p[i].imag());
        }
        os << '\n';
    }
    return os.str();
}

std::string envelope_csv(const EnvelopeModel& model, int samples) {
    std::ostringstream os;
    os << "u,f,active\n";
    const double right = model.curves.back().right_endpoint();
    for (int s = 0; s <= samples; ++s) {
        const double u = right * s / samples;
        const auto v = envelope_eval(model, u);
        os << format_double(u) << ',' << format_double(v.value) << ',' << v.active_curve << '\n';
    }
    return os.str();
}

CommandResult payload_result(int code, JsonOut payload,
                             std::vector<std::string> artifacts = {}) {
    return CommandResult{code, payload.dump(1), std::move(artifacts)};
}

struct MemberOptions {
    std::string family;
    std::string input_path;
    std::string w_inline;
    double tol = 1e-10;
    int budget = 10000;
    std::uint64_t seed = 0;
    bool strict = false;
};

CommandResult run_member(const MemberOptions& opt) {
    MemberInput in = parse_member_input(read_text_file(opt.input_path));
    if (!opt.w_inline.empty()) in.w = parse_point_text(opt.w_inline);
    if (!in.w) throw std::invalid_argument("member: no query point (provide \"w\" or --w)");
    const double tol = in.tol.value_or(opt.tol);
    const PointCk& w = *in.w;

    Membership result = Membership::unknown;
    std::optional<double> norm;
    std::optional<SeparationCertificate> certificate;

    if (opt.family == "pick") {
        if (!in.alpha) throw std::invalid_argument("member: pick family needs \"alpha\"");
        result = pick_membership(PickNodes(*in.alpha), w, tol);
    } else if (opt.family == "perp") {
        if (!in.generators) throw std::invalid_argument("member: perp family needs \"generators\"");
        result = perp_membership(ideal_analyze(*in.generators, tol), w, tol);
    } else if (opt.family == "biperp") {
        if (!in.D) throw std::invalid_argument("member: biperp family needs \"D\"");
        BiperpResult r = biperp_membership(*in.D, w, opt.budget, opt.seed, tol);
        result = r.result;
        certificate = std::move(r.certificate);
    } else if (opt.family == "example24") {
        if (w.size() != 2) throw std::invalid_argument("member: example24 needs a point in C^2");
        norm = example24_norm(w[0], w[1]);
        result = *norm <= 1.0 + tol ? Membership::member : Membership::non_member;
    } else if (opt.family == "idempotent") {
        if (!in.Q) throw std::invalid_argument("member: idempotent family needs \"Q\"");
        norm = similarity_rep_norm(*in.Q, w, tol);
        result = *norm <= 1.0 + tol ? Membership::member : Membership::non_member;
    } else {
        throw std::invalid_argument("member: unknown family " + opt.family);
    }

    JsonOut out = JsonOut::object();
    out.set("result", JsonOut::str(to_string(result)));
    if (norm) out.set("norm", JsonOut::number(*norm));
    if (certificate) out.set("certificate", certificate_json(*certificate));
    const int code = (result == Membership::unknown && opt.strict) ? 2 : 0;
    return payload_result(code, std::move(out));
}

struct GenerateOptions {
    std::string what;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
};

CommandResult run_generate(const GenerateOptions& opt) {
    const GenerateConfig cfg = parse_generate_config(read_text_file(opt.config_path));
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (!fs::is_directory(opt.out_dir))
        throw std::invalid_argument("generate: cannot create output directory " + opt.out_dir);

    std::vector<std::string> artifacts;
    JsonOut summary = JsonOut::object();

    if (opt.what == "envelope") {
        EnvelopeModel model;
        try {
            model = build_sequence(cfg.N, cfg.a0, cfg.c0, cfg.jump_min, opt.seed);
        } catch (const std::runtime_error& e) {
            JsonOut err = JsonOut::object().set("error", JsonOut::str(e.what()));
            return payload_result(2, std::move(err));
        }
        const std::string base = (fs::path(opt.out_dir) / "envelope").string();
        atomic_write_file(base + ".json", envelope_json(model).dump(1) + "\n");
        atomic_write_file(base + ".csv", envelope_csv(model, cfg.samples));
        std::vector<HermitianMatrix> gens;
        for (const auto& c : model.curves) gens.push_back(pac_matrix(c.a, c.c));
        const SchurIdealGens ideal = ideal_analyze(std::move(gens));
        atomic_write_file((fs::path(opt.out_dir) / "generators.json").string(),
                          ideal_json(ideal).dump(1) + "\n");
        artifacts = {base + ".json", base + ".csv",
                     (fs::path(opt.out_dir) / "generators.json").string()};
        JsonOut bps = JsonOut::array();
        for (double b : model.breakpoints) bps.push(JsonOut::number(b));
        summary.set("curves", JsonOut::integer(static_cast<long long>(model.curves.size())))
            .set("breakpoints", std::move(bps))
            .set("mu_limit", JsonOut::number(model.mu_limit));
    } else if (opt.what == "bball" || opt.what == "hc") {
        SampleCloud cloud;
        if (opt.what == "bball")
            cloud = generated_ball_sample(cfg.D, cfg.rounds, cfg.per_round, opt.seed);
        else
            cloud = hc_hull_sample(cfg.D, cfg.max_degree, cfg.n_polys, cfg.grid, opt.seed);
        const std::string csv_path = (fs::path(opt.out_dir) / "cloud.csv").string();
        const std::string meta_path = (fs::path(opt.out_dir) / "cloud.json").string();
        atomic_write_file(csv_path, cloud_csv(cloud));
        JsonOut meta = JsonOut::object()
                           .set("kind", JsonOut::str(cloud.kind))
                           .set("k", JsonOut::integer(cloud.k))
                           .set("seed", JsonOut::integer(static_cast<long long>(cloud.seed)))
                           .set("rounds", JsonOut::integer(cloud.rounds))
                           .set("count",
                                JsonOut::integer(static_cast<long long>(cloud.points.size())));
        JsonOut pts = JsonOut::array();
        for (const auto& p : cloud.points) pts.push(point_json(p));
        meta.set("points", std::move(pts));
        atomic_write_file(meta_path, meta.dump(1) + "\n");
        artifacts = {csv_path, meta_path};
        summary.set("points", JsonOut::integer(static_cast<long long>(cloud.points.size())))
            .set("k", JsonOut::integer(cloud.k));
    } else {
        throw std::invalid_argument("generate: unknown kind " + opt.what);
    }

    JsonOut files = JsonOut::array();
    for (const auto& a : artifacts) files.push(JsonOut::str(a));
    summary.set("artifacts", std::move(files));
    return payload_result(0, std::move(summary), artifacts);
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
    CLI::App app{"ckballs: membership, generation and search tools for unit balls in C^k"};
    app.require_subcommand(1);

    MemberOptions member;
    auto* member_cmd = app.add_subcommand("member", "decide membership of a point in a ball");
    member_cmd->add_option("--family", member.family, "pick|perp|biperp|example24|idempotent")
        ->required();
    member_cmd->add_option("--input", member.input_path, "JSON input file")->required();
    member_cmd->add_option("--w", member.w_inline, "query point as inline JSON [[re,im],...]");
    member_cmd->add_option("--tol", member.tol, "tolerance (default 1e-10)");
    member_cmd->add_option("--budget", member.budget, "iteration budget for search families");
    member_cmd->add_option("--seed", member.seed, "random seed");
    member_cmd->add_flag("--strict", member.strict, "exit 2 when the answer is unknown");

    GenerateOptions gen;
    auto* gen_cmd = app.add_subcommand("generate", "sample clouds or build the envelope");
    gen_cmd->add_option("--what", gen.what, "bball|hc|envelope")->required();
    gen_cmd->add_option("--config", gen.config_path, "JSON config file")->required();
    gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();
    gen_cmd->add_option("--seed", gen.seed, "random seed");

    auto* vnn_cmd = app.add_subcommand("vnn", "von Neumann inequality tools");
    vnn_cmd->require_subcommand(1);

    std::string tuple_path, poly_path, oracle_path, points_path, out_path;
    int grid = 128, dim = 4, nvars = 3, iters = 1000;
    std::uint64_t vseed = 0;

    auto* check_cmd = vnn_cmd->add_subcommand("check", "ratio ||p(T)|| / sup|p|");
    check_cmd->add_option("--tuple", tuple_path, "tuple JSON file")->required();
    check_cmd->add_option("--poly", poly_path, "polynomial JSON file")->required();
    check_cmd->add_option("--grid", grid, "torus grid points per variable");

    auto* search_cmd = vnn_cmd->add_subcommand("search", "random search for violations");
    search_cmd->add_option("--dim", dim, "matrix dimension");
    search_cmd->add_option("--n", nvars, "number of commuting operators");
    search_cmd->add_option("--iters", iters, "hill-climb iterations");
    search_cmd->add_option("--seed", vseed, "random seed");
    search_cmd->add_option("--grid", grid, "torus grid points per variable");
    search_cmd->add_option("--out", out_path, "write the best configuration to this file");

    auto* falsify_cmd = vnn_cmd->add_subcommand("falsify", "feed members through a polynomial");
    falsify_cmd->add_option("--oracle", oracle_path, "JSON file with {\"Q\": matrix}")->required();
    falsify_cmd->add_option("--points", points_path, "JSON file with member points")->required();
    falsify_cmd->add_option("--poly", poly_path, "polynomial JSON file")->required();
    falsify_cmd->add_option("--grid", grid, "torus grid points per variable");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream os;
        os << app.help();
        return CommandResult{0, os.str(), {}};
    } catch (const CLI::ParseError& e) {
        JsonOut err = JsonOut::object().set("error", JsonOut::str(e.what()));
        return CommandResult{1, err.dump(1), {}};
    }

    try {
        if (member_cmd->parsed()) return run_member(member);
        if (gen_cmd->parsed()) return run_generate(gen);
        if (check_cmd->parsed()) {
            const CommutingTuple t = parse_tuple(read_text_file(tuple_path));
            const Poly p = parse_poly(read_text_file(poly_path));
            const double ratio = vnn_ratio(p, t, grid);
            return payload_result(0, JsonOut::object().set("ratio", JsonOut::number(ratio)));
        }
        if (search_cmd->parsed()) {
            const SearchResult r = violation_search(nvars, dim, vseed, iters, grid);
            JsonOut out = JsonOut::object()
                              .set("ratio", JsonOut::number(r.best_ratio))
                              .set("grid_used", JsonOut::integer(r.grid_used))
                              .set("violation", JsonOut::boolean(r.certificate.has_value()))
                              .set("tuple", tuple_json(r.tuple))
                              .set("poly", poly_json(r.poly));
            std::vector<std::string> artifacts;
            if (!out_path.empty()) {
                atomic_write_file(out_path, out.dump(1) + "\n");
                artifacts.push_back(out_path);
            }
            return payload_result(0, std::move(out), std::move(artifacts));
        }
        if (falsify_cmd->parsed()) {
            const std::string oracle_text = read_text_file(oracle_path);
            MemberInput oracle_in = parse_member_input(oracle_text);
            ComplexMatrix q;
            if (oracle_in.Q.has_value()) {
                q = oracle_in.Q->matrix();
            } else {
                q = parse_matrix_text(oracle_text);
            }
            const BallOracle oracle = example31_ball(q);
            const std::vector<PointCk> points = parse_point_list(read_text_file(points_path));
            const Poly p = parse_poly(read_text_file(poly_path));
            const FalsifyOutcome outcome = hyperconvexity_falsify(oracle, points, p, grid);
            JsonOut out = JsonOut::object().set(
                "result", JsonOut::str(outcome.falsified ? "falsified" : "no_violation_found"));
            if (outcome.falsified) {
                out.set("witness", point_json(outcome.witness));
                out.set("witness_norm", JsonOut::number(outcome.witness_norm));
            }
            return payload_result(0, std::move(out));
        }
        JsonOut err = JsonOut::object().set("error", JsonOut::str("no subcommand"));
        return CommandResult{1, err.dump(1), {}};
    } catch (const std::invalid_argument& e) {
        JsonOut err = JsonOut::object().set("error", JsonOut::str(e.what()));
        return CommandResult{1, err.dump(1), {}};
    } catch (const std::exception& e) {
        JsonOut err = JsonOut::object().set("error", JsonOut::str(e.what()));
        return CommandResult{1, err.dump(1), {}};
    }
}

}  // namespace ckballs::cli
