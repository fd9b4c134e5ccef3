// Command-line front end: wires the library to JSON files and stdout.
//
// Output protocol: the first stdout line of every run is the run manifest
// (command, inputs, config, seed, version, timestamp); subsequent lines are
// JSON results fully determined by the manifest fields other than the
// timestamp. Human-readable summaries go to stderr.
//
// Exit codes: 0 success, 2 input/schema error, 3 precondition violation,
// 4 no result found.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdpoly/cdpoly.hpp"

namespace {

using cdpoly::CDNumber;
using cdpoly::json;

constexpr int kExitSchema = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNoResult = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cdpoly::SchemaError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_manifest(const std::string& command, const json& inputs, const json& config,
                    std::uint64_t seed) {
    json m;
    m["command"] = command;
    m["inputs"] = inputs;
    m["config"] = config;
    m["seed"] = seed;
    m["artifact_version"] = std::string(cdpoly::kVersion);
    m["timestamp"] = timestamp_utc();
    std::cout << m.dump() << "\n";
}

json report_to_json(const cdpoly::SolveReport& r) {
    json j;
    j["start_index"] = r.start_index;
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["zero"] = r.zero ? cdpoly::cd_to_json(*r.zero) : json(nullptr);
    j["kernel_dim"] = r.kernel_dim;
    j["jacobian_singular_values"] = r.jacobian_singular_values;
    return j;
}

CDNumber point_for_polynomial(const cdpoly::Polynomial& p, const std::string& text) {
    const CDNumber z = cdpoly::parse_cd_number(text);
    if (z.dim() != (std::size_t{1} << p.level()))
        throw cdpoly::SchemaError("point: expected " +
                                  std::to_string(std::size_t{1} << p.level()) +
                                  " coordinates for level " + std::to_string(p.level()) +
                                  ", got " + std::to_string(z.dim()));
    return z;
}

int cmd_eval(const std::string& poly_file, const std::string& point_text) {
    const cdpoly::Polynomial p = cdpoly::parse_polynomial(read_file(poly_file));
    const CDNumber z = point_for_polynomial(p, point_text);
    print_manifest("eval", {{"poly_file", poly_file}, {"point", json::parse(point_text)}},
                   json::object(), 0);
    const CDNumber value = cdpoly::evaluate(p, z);
    std::cout << cdpoly::cd_to_json(value).dump() << "\n";
    std::cerr << "eval: |P(z)| = " << cdpoly::norm(value) << "\n";
    return 0;
}

int cmd_solve(const std::string& poly_file, unsigned starts, unsigned max_iters, double tol,
              std::uint64_t seed, unsigned count, std::optional<double> radius,
              unsigned threads) {
    const cdpoly::Polynomial p = cdpoly::parse_polynomial(read_file(poly_file));
    cdpoly::SolveConfig cfg;
    cfg.starts = starts;
    cfg.max_iters = max_iters;
    cfg.tol_residual = tol;
    cfg.seed = seed;
    cfg.search_radius = radius;
    cfg.threads = threads;
    json config{{"starts", starts},
                {"max_iters", max_iters},
                {"tol_residual", tol},
                {"count", count},
                {"threads", threads},
                {"search_radius",
                 radius ? json(*radius) : json(cdpoly::default_search_radius(p))}};
    print_manifest("solve", {{"poly_file", poly_file}}, config, seed);

    std::vector<cdpoly::SolveReport> reports;
    if (count <= 1)
        reports.push_back(cdpoly::find_zero(p, cfg));
    else
        reports = cdpoly::find_zeros(p, cfg, count);

    unsigned successes = 0;
    for (const auto& r : reports) {
        if (r.zero) ++successes;
        std::cout << report_to_json(r).dump() << "\n";
    }
    std::cerr << "solve: " << successes << "/" << reports.size() << " reports carry a zero\n";
    return successes > 0 ? 0 : kExitNoResult;
}

int cmd_roots(const std::string& zeta_text, unsigned n, unsigned samples, std::uint64_t seed) {
    const CDNumber zeta = cdpoly::parse_cd_number(zeta_text);
    print_manifest("roots", {{"zeta", json::parse(zeta_text)}, {"n", n}},
                   {{"samples", samples}}, seed);
    auto rng = cdpoly::rng_stream(seed, 0);
    const auto family = cdpoly::nth_root_family(zeta, n, rng, samples);
    for (const auto& r : family) {
        const double resid =
            cdpoly::norm(cdpoly::int_pow(r.value, n) - zeta.embedded(r.value.level()));
        json j{{"value", cdpoly::cd_to_json(r.value)},
               {"branch", r.branch_index},
               {"direction", cdpoly::cd_to_json(r.direction)},
               {"residual", resid}};
        std::cout << j.dump() << "\n";
    }
    std::cerr << "roots: " << family.size() << " samples\n";
    return 0;
}

int cmd_dim(const std::string& poly_file, const std::string& point_text, double threshold_ratio) {
    const cdpoly::Polynomial p = cdpoly::parse_polynomial(read_file(poly_file));
    const CDNumber z = point_for_polynomial(p, point_text);
    print_manifest("dim", {{"poly_file", poly_file}, {"point", json::parse(point_text)}},
                   {{"threshold_ratio", threshold_ratio}}, 0);
    const unsigned kdim = cdpoly::local_zero_set_dimension(p, z, threshold_ratio);
    const Eigen::MatrixXd jac =
        cdpoly::fd_jacobian(cdpoly::residual_map(p), cdpoly::to_eigen(z.embedded(p.level())));
    const Eigen::VectorXd sigma = cdpoly::singular_values(jac);
    json j{{"kernel_dim", kdim},
           {"singular_values", std::vector<double>(sigma.data(), sigma.data() + sigma.size())}};
    std::cout << j.dump() << "\n";
    std::cerr << "dim: kernel dimension " << kdim << "\n";
    return 0;
}

int cmd_identity_check(unsigned lemma, unsigned level, unsigned trials, std::uint64_t seed,
                       double tol) {
    using namespace cdpoly;
    print_manifest("identity-check", {{"lemma", lemma}},
                   {{"level", level}, {"trials", trials}, {"tol", tol}}, seed);
    auto rng = rng_stream(seed, lemma);
    std::uniform_real_distribution<double> norm_range(0.1, 3.0);
    double max_err = 0.0;
    json extra = json::object();

    for (unsigned t = 0; t < trials; ++t) {
        const CDNumber m = sample_unit_imaginary(rng, level) * norm_range(rng);
        CDNumber n = sample_unit_imaginary(rng, level) * norm_range(rng);
        switch (lemma) {
            case 9:
                max_err = std::max(
                    max_err, norm(commutator_closed_form(m, n) - commutator(exp(m), exp(n))));
                break;
            case 11: {
                const auto split = split_parallel_orthogonal(n, m);
                n = split.orthogonal;
                if (norm(n) < 1e-9) continue;
                max_err = std::max(max_err, norm(commutator_orthogonal_closed_form(m, n) -
                                                 commutator(exp(m), exp(n))));
                break;
            }
            case 12:
                max_err = std::max(max_err, norm(anticommutator_closed_form(m, n) -
                                                 anticommutator(exp(m), exp(n))));
                break;
            case 14: {
                const CDNumber k = m;
                const CDNumber sol = conjugate_to_real(k);
                max_err = std::max(max_err, norm(psi_residual(k, sol)));
                if (t == 0) {
                    const auto dim_rep = psi_zero_set_dimension(k, sol);
                    extra["measured_rank"] = dim_rep.rank;
                    extra["measured_kernel_dim"] = dim_rep.kernel_dim;
                }
                break;
            }
            default:
                throw SchemaError("identity-check: lemma must be one of 9, 11, 12, 14");
        }
    }

    const bool pass = max_err <= tol;
    json j{{"lemma", lemma}, {"level", level},   {"trials", trials},
           {"max_error", max_err}, {"tol", tol}, {"pass", pass}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cout << j.dump() << "\n";
    std::cerr << (pass ? "pass" : "fail") << ", max_err = " << max_err << "\n";
    return pass ? 0 : kExitNoResult;
}

int cmd_symmetry(const std::string& poly_file, const std::string& g_text, unsigned samples,
                 double radius, double tol, std::uint64_t seed, bool right) {
    const cdpoly::Polynomial p = cdpoly::parse_polynomial(read_file(poly_file));
    const CDNumber g = cdpoly::parse_cd_number(g_text);
    print_manifest("symmetry", {{"poly_file", poly_file}, {"g", json::parse(g_text)}},
                   {{"samples", samples}, {"radius", radius}, {"tol", tol}, {"right", right}},
                   seed);
    auto rng = cdpoly::rng_stream(seed, 0);
    const auto check = right ? cdpoly::is_right_symmetry(p, g, samples, radius, tol, rng)
                             : cdpoly::is_left_symmetry(p, g, samples, radius, tol, rng);
    json j{{"symmetric", check.symmetric},
           {"max_deviation", check.max_deviation},
           {"worst_sample", cdpoly::cd_to_json(check.worst_sample)}};
    std::cout << j.dump() << "\n";
    std::cerr << "symmetry: " << (check.symmetric ? "true" : "false")
              << ", max deviation " << check.max_deviation << "\n";
    return 0;
}

int cmd_average(const std::string& poly_file, const std::string& circle_direction,
                unsigned nodes, const std::string& finite_group_file,
                const std::vector<std::string>& points) {
    const cdpoly::Polynomial p = cdpoly::parse_polynomial(read_file(poly_file));
    if (circle_direction.empty() == finite_group_file.empty())
        throw cdpoly::SchemaError(
            "average: pass exactly one of --circle-direction or --finite-group-file");

    json inputs{{"poly_file", poly_file}};
    cdpoly::SubgroupSpec group = [&] {
        if (!circle_direction.empty()) {
            inputs["circle_direction"] = json::parse(circle_direction);
            return cdpoly::SubgroupSpec::circle(cdpoly::parse_cd_number(circle_direction),
                                                nodes);
        }
        inputs["finite_group_file"] = finite_group_file;
        json gj;
        try {
            gj = json::parse(read_file(finite_group_file));
        } catch (const json::parse_error& e) {
            throw cdpoly::SchemaError(std::string("group: ") + e.what());
        }
        return cdpoly::SubgroupSpec::finite(cdpoly::group_elements_from_json(gj));
    }();
    print_manifest("average", inputs, {{"nodes", nodes}, {"points", points.size()}}, 0);

    const cdpoly::AveragedEvaluator avg = cdpoly::average(p, group);
    for (const auto& text : points) {
        const CDNumber z = cdpoly::parse_cd_number(text);
        json j{{"point", json::parse(text)}, {"value", cdpoly::cd_to_json(avg(z))}};
        std::cout << j.dump() << "\n";
    }
    std::cerr << "average: evaluated " << points.size() << " points\n";
    return 0;
}

int cmd_zerodiv(unsigned level) {
    print_manifest("zerodiv", {{"level", level}}, json::object(), 0);
    const auto pair = cdpoly::find_zero_divisor_pair(level);
    if (!pair) {
        std::cout << json{{"found", false}}.dump() << "\n";
        std::cerr << "zerodiv: none\n";
        return 0;
    }
    json j{{"found", true},
           {"x", cdpoly::cd_to_json(pair->first)},
           {"y", cdpoly::cd_to_json(pair->second)},
           {"product_norm", cdpoly::norm(pair->first * pair->second)}};
    std::cout << j.dump() << "\n";
    std::cerr << "zerodiv: found pair\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cayley-Dickson polynomial toolkit"};
    app.require_subcommand(1);

    std::string poly_file, point_text, zeta_text, g_text, circle_direction, finite_group_file;
    std::vector<std::string> points;
    unsigned starts = 64, max_iters = 500, count = 1, n = 2, samples = 4, level = 2,
             trials = 1000, lemma = 9, nodes = 16, threads = 1;
    double tol = 1e-9, radius_flag = 0.0, threshold_ratio = 1e-6, sym_radius = 2.0,
           sym_tol = 1e-9;
    std::uint64_t seed = 0;
    bool right = false, radius_set = false;

    auto* eval = app.add_subcommand("eval", "evaluate a polynomial at a point");
    eval->add_option("poly", poly_file, "polynomial JSON file")->required();
    eval->add_option("point", point_text, "point as a JSON array of 2^v reals")->required();

    auto* solve = app.add_subcommand("solve", "find zeros by multi-start descent");
    solve->add_option("poly", poly_file)->required();
    solve->add_option("--starts", starts);
    solve->add_option("--max-iters", max_iters);
    solve->add_option("--tol", tol);
    solve->add_option("--seed", seed);
    solve->add_option("--count", count);
    solve->add_option("--threads", threads);
    solve->add_option("--radius", radius_flag)->each([&](const std::string&) {
        radius_set = true;
    });

    auto* roots = app.add_subcommand("roots", "n-th roots of a target");
    roots->add_option("zeta", zeta_text)->required();
    roots->add_option("n", n)->required();
    roots->add_option("--samples", samples, "random directions per spherical branch");
    roots->add_option("--seed", seed);

    auto* dim = app.add_subcommand("dim", "local zero-set dimension at a zero");
    dim->add_option("poly", poly_file)->required();
    dim->add_option("point", point_text)->required();
    dim->add_option("--threshold-ratio", threshold_ratio);

    auto* idc = app.add_subcommand("identity-check", "check a closed-form identity");
    idc->add_option("--lemma", lemma)->required()->check(CLI::IsMember({9, 11, 12, 14}));
    idc->add_option("--level", level);
    idc->add_option("--trials", trials);
    idc->add_option("--seed", seed);
    idc->add_option("--tol", tol);

    auto* sym = app.add_subcommand("symmetry", "test P(gz) = P(z) over random samples");
    sym->add_option("poly", poly_file)->required();
    sym->add_option("g", g_text)->required();
    sym->add_option("--samples", samples);
    sym->add_option("--radius", sym_radius);
    sym->add_option("--tol", sym_tol);
    sym->add_option("--seed", seed);
    sym->add_flag("--right", right, "test the right action P(zg) instead");

    auto* avg = app.add_subcommand("average", "group-average a polynomial at points");
    avg->add_option("poly", poly_file)->required();
    avg->add_option("--circle-direction", circle_direction, "unit imaginary JSON array");
    avg->add_option("--nodes", nodes);
    avg->add_option("--finite-group-file", finite_group_file);
    // points are picked up verbatim from the remaining arguments; a vector
    // option would split bracketed JSON arrays on commas
    avg->allow_extras();

    auto* zd = app.add_subcommand("zerodiv", "search for a basis zero-divisor pair");
    zd->add_option("--level", level)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSchema;
    }

    try {
        if (eval->parsed()) return cmd_eval(poly_file, point_text);
        if (solve->parsed())
            return cmd_solve(poly_file, starts, max_iters, tol, seed, count,
                             radius_set ? std::optional<double>(radius_flag) : std::nullopt,
                             threads);
        if (roots->parsed()) return cmd_roots(zeta_text, n, samples, seed);
        if (dim->parsed()) return cmd_dim(poly_file, point_text, threshold_ratio);
        if (idc->parsed()) return cmd_identity_check(lemma, level, trials, seed, tol);
        if (sym->parsed())
            return cmd_symmetry(poly_file, g_text, samples, sym_radius, sym_tol, seed, right);
        if (avg->parsed()) {
            points = avg->remaining();
            if (points.empty())
                throw cdpoly::SchemaError("average: pass at least one point as a JSON array");
            return cmd_average(poly_file, circle_direction, nodes, finite_group_file, points);
        }
        if (zd->parsed()) return cmd_zerodiv(level);
    } catch (const cdpoly::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const cdpoly::PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    }
    return 0;
}
