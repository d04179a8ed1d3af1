// Command-line front end: file-driven, reproducible pipelines over the
// hiring-network toolkit. Every randomized command takes an explicit
// --master-seed and emits a manifest next to its output, so identical
// manifests imply byte-identical outputs at any --workers count.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hirenet/errors.hpp"
#include "hirenet/io.hpp"
#include "hirenet/stats.hpp"

namespace {

constexpr const char* kVersion = "hirenet 0.1.0";

using nlohmann::json;
using namespace hirenet;

json json_num(double v) { return json(io::round_g6(v)); }

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw load_error(path, 0, "cannot open file");
    return in;
}

std::string digest_file(const std::string& path) {
    auto in = open_input(path);
    return io::digest_stream(in);
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw load_error(path, 0, "cannot open file for writing");
    out << contents;
}

// Run manifest: command, resolved parameters, input digests, tool version.
struct Manifest {
    json parameters = json::object();
    json inputs = json::object();
    std::string command;

    void input(const std::string& role, const std::string& path) {
        inputs[role] = json{{"path", path}, {"digest", digest_file(path)}};
    }

    void write(const std::string& out_path) const {
        json j;
        j["command"] = command;
        j["version"] = kVersion;
        j["parameters"] = parameters;
        j["inputs"] = inputs;
        write_text_file(out_path + ".manifest.json", j.dump(2) + "\n");
    }
};

LoadedNetwork load_network_files(const std::string& vertex_path, const std::string& edge_path) {
    auto vin = open_input(vertex_path);
    auto ein = open_input(edge_path);
    return load_network(vin, ein, vertex_path, edge_path);
}

void emit_report(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

// Applies HIRENET_<FLAG> environment overrides uniformly.
CLI::Option* with_env(CLI::Option* opt, const std::string& flag) {
    std::string name = "HIRENET_" + flag;
    for (char& c : name) {
        if (c == '-') c = '_';
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return opt->envname(name);
}

struct CommonArgs {
    unsigned workers = 1;
};

void add_workers(CLI::App* cmd, CommonArgs& common) {
    with_env(cmd->add_option("--workers", common.workers, "parallel worker threads"), "workers");
}

int cmd_rank(const std::string& vertices, const std::string& edges, std::size_t restarts,
             std::size_t steps, std::uint64_t seed, const std::string& out,
             const std::string& matrix_out, unsigned workers) {
    const auto loaded = load_network_files(vertices, edges);
    const auto& net = loaded.net;
    const auto minimized = minimize_violations(net, restarts, steps, seed, workers);
    const auto scores = average_prestige(minimized.rankings);

    std::ostringstream csv;
    io::write_prestige_csv(csv, net, scores, minimized.best_violations);
    write_text_file(out, csv.str());

    if (!matrix_out.empty()) {
        std::ostringstream mcsv;
        io::write_decile_matrix_csv(mcsv, decile_density_matrix(net, scores.mean_rank));
        write_text_file(matrix_out, mcsv.str());
    }

    Manifest manifest;
    manifest.command = "rank";
    manifest.input("vertices", vertices);
    manifest.input("edges", edges);
    manifest.parameters = {{"restarts", restarts},
                           {"steps", steps},
                           {"master_seed", seed},
                           {"out", out},
                           {"decile_matrix_out", matrix_out}};
    manifest.write(out);

    json report;
    report["n_nodes"] = net.node_count();
    report["n_edges"] = net.edge_count();
    report["best_violations"] = minimized.best_violations;
    report["samples_used"] = scores.samples_used;
    report["upward_fraction"] = json_num(upward_fraction(net, scores));
    std::cout << report.dump(2) << "\n";
    return 0;
}

PrestigeScores prestige_for(const LoadedNetwork& loaded, const std::string& prestige_file,
                            bool rank_inline, std::size_t restarts, std::size_t steps,
                            std::uint64_t seed, unsigned workers, Manifest& manifest) {
    if (!prestige_file.empty()) {
        auto in = open_input(prestige_file);
        auto scores = io::read_prestige_csv(in, prestige_file);
        if (scores.mean_rank.size() != static_cast<std::size_t>(loaded.net.node_count()))
            throw std::invalid_argument("prestige file does not cover the network's nodes");
        manifest.input("prestige", prestige_file);
        return scores;
    }
    if (loaded.preset_prestige) {
        PrestigeScores scores;
        scores.mean_rank = *loaded.preset_prestige;
        scores.samples_used = 1;
        return scores;
    }
    if (!rank_inline)
        throw std::invalid_argument(
            "prestige required: pass --prestige FILE, use a vertex file with a pi column, or --rank");
    const auto minimized = minimize_violations(loaded.net, restarts, steps, seed, workers);
    return average_prestige(minimized.rankings);
}

int cmd_sweep(const std::string& vertices, const std::string& edges, const std::string& p_spec,
              const std::string& q_spec, bool all_seeds, std::vector<NodeId> seed_nodes,
              std::uint64_t trials, std::uint64_t seed, const std::string& out,
              const std::string& deciles_out, const std::string& prestige_file, bool rank_inline,
              std::size_t restarts, std::size_t steps, unsigned workers) {
    const auto loaded = load_network_files(vertices, edges);
    const auto& net = loaded.net;
    const auto p_grid = io::parse_grid(p_spec);
    const auto q_grid = io::parse_grid(q_spec);

    if (all_seeds == !seed_nodes.empty())
        throw std::invalid_argument("pass exactly one of --all-seeds or --seed-node");
    if (all_seeds) {
        seed_nodes.resize(static_cast<std::size_t>(net.node_count()));
        std::iota(seed_nodes.begin(), seed_nodes.end(), 0);
    }

    Manifest manifest;
    manifest.command = "sweep";
    manifest.input("vertices", vertices);
    manifest.input("edges", edges);

    const auto result = sweep(net, seed_nodes, p_grid, q_grid, trials, seed, workers);
    std::ostringstream csv;
    io::write_sweep_csv(csv, result);
    write_text_file(out, csv.str());

    if (!deciles_out.empty()) {
        const auto scores =
            prestige_for(loaded, prestige_file, rank_inline, restarts, steps, seed, workers, manifest);
        const auto curves = decile_curves(result, scores);
        std::ostringstream dcsv;
        io::write_decile_curves_csv(dcsv, curves);
        write_text_file(deciles_out, dcsv.str());
    }

    manifest.parameters = {{"p_grid", p_spec},
                           {"q_grid", q_spec},
                           {"all_seeds", all_seeds},
                           {"seed_nodes", seed_nodes},
                           {"trials", trials},
                           {"master_seed", seed},
                           {"out", out},
                           {"deciles_out", deciles_out},
                           {"workers_note", "results are worker-count invariant"}};
    manifest.write(out);
    return 0;
}

int cmd_simulate(const std::string& vertices, const std::string& edges, NodeId seed_node, double p,
                 double q, std::uint64_t trials, std::uint64_t seed, const std::string& out) {
    const auto loaded = load_network_files(vertices, edges);
    EpidemicConfig config{p, q, trials, seed};
    const auto summary = mc_summary(loaded.net, seed_node, config);

    json report;
    report["node"] = seed_node;
    report["label"] = loaded.net.label(seed_node);
    report["p"] = json_num(p);
    report["q"] = json_num(q);
    report["trials"] = trials;
    report["master_seed"] = seed;
    report["mean_size_frac"] = json_num(summary.mean_size_frac);
    report["mean_length"] = json_num(summary.mean_length);
    report["mean_length_norm"] =
        summary.mean_length_norm ? json_num(*summary.mean_length_norm) : json(nullptr);
    emit_report(report, out);
    if (!out.empty()) {
        Manifest manifest;
        manifest.command = "simulate";
        manifest.input("vertices", vertices);
        manifest.input("edges", edges);
        manifest.parameters = {{"seed_node", seed_node}, {"p", p},
                               {"q", q},                 {"trials", trials},
                               {"master_seed", seed},    {"out", out}};
        manifest.write(out);
    }
    return 0;
}

struct CorpusArgs {
    std::string careers;
    std::string keywords;
    std::string topic;
    int grace = 2;
};

std::pair<std::vector<FacultyCareer>, TopicSpec> load_corpus(const CorpusArgs& args) {
    auto cin_ = open_input(args.careers);
    auto careers = load_careers(cin_, args.careers);
    auto kin = open_input(args.keywords);
    std::string topic_name = args.topic;
    if (topic_name.empty()) topic_name = std::filesystem::path(args.keywords).stem().string();
    auto topic = load_keywords(kin, args.keywords, topic_name);
    return {std::move(careers), std::move(topic)};
}

int cmd_adopt(const CorpusArgs& args, const std::string& out, const std::string& arrows_out) {
    const auto [careers, topic] = load_corpus(args);
    const auto classifications = classify_all(careers, topic, args.grace);

    std::ostringstream csv;
    io::write_classifications_csv(csv, classifications);
    write_text_file(out, csv.str());

    if (!arrows_out.empty()) {
        const auto arrows = transmission_arrows(classifications, careers);
        std::ostringstream acsv;
        io::write_arrows_csv(acsv, arrows);
        write_text_file(arrows_out, acsv.str());
    }

    Manifest manifest;
    manifest.command = "adopt";
    manifest.input("careers", args.careers);
    manifest.input("keywords", args.keywords);
    manifest.parameters = {{"topic", topic.name},
                           {"grace", args.grace},
                           {"out", out},
                           {"arrows_out", arrows_out}};
    manifest.write(out);

    long long n_null = 0, n_hiring = 0, n_non = 0;
    for (const auto& c : classifications) {
        if (c.scenario == Scenario::Null) ++n_null;
        else if (c.scenario == Scenario::Hiring) ++n_hiring;
        else ++n_non;
    }
    json report;
    report["topic"] = topic.name;
    report["n_departments"] = classifications.size();
    report["n_null"] = n_null;
    report["n_hiring"] = n_hiring;
    report["n_non_hiring"] = n_non;
    const auto f_obs = observed_hiring_fraction(classifications);
    report["f_obs"] = f_obs ? json_num(*f_obs) : json(nullptr);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_permtest(const CorpusArgs& args, std::size_t n_perms, std::uint64_t seed,
                 const std::string& out, unsigned workers) {
    const auto [careers, topic] = load_corpus(args);
    const auto result = permutation_null(careers, topic, n_perms, seed, args.grace, workers);

    json report;
    report["topic"] = topic.name;
    report["f_obs"] = json_num(result.f_obs);
    report["f_exp_mean"] = json_num(result.f_exp_mean);
    report["f_exp_std"] = json_num(result.f_exp_std);
    report["p_value"] = json_num(result.p_value);
    report["n_perms"] = result.n_perms;
    report["master_seed"] = seed;
    emit_report(report, out);
    if (!out.empty()) {
        Manifest manifest;
        manifest.command = "permtest";
        manifest.input("careers", args.careers);
        manifest.input("keywords", args.keywords);
        manifest.parameters = {{"topic", topic.name},
                               {"grace", args.grace},
                               {"n_perms", n_perms},
                               {"master_seed", seed},
                               {"out", out}};
        manifest.write(out);
    }
    return 0;
}

int cmd_collapse(const std::string& sweep_file, const std::string& prestige_file,
                 const std::string& out, const std::string& fit_out) {
    auto sin = open_input(sweep_file);
    const auto sweep = io::read_sweep_csv(sin, sweep_file);
    auto pin = open_input(prestige_file);
    const auto scores = io::read_prestige_csv(pin, prestige_file);

    const auto curves = decile_curves(sweep, scores);

    // d = 1 maps to p* = 0, so the bottom decile cannot be rescaled and is
    // left out of both sides of the comparison.
    std::vector<std::vector<XY>> raw, rescaled;
    std::vector<XY> collapse_points, raw_points;
    std::ostringstream csv;
    csv << "decile,p,p_star,mean_size_frac\n";
    for (const auto& curve : curves) {
        if (curve.d >= 1.0) continue;
        std::vector<XY> r;
        for (const auto& pt : curve.points) {
            const double p_star = effective_p(pt.x, curve.d);
            r.push_back({p_star, pt.y});
            collapse_points.push_back({p_star, pt.y});
            raw_points.push_back({pt.x, pt.y});
            csv << io::format_g6(curve.d) << ',' << io::format_g6(pt.x) << ','
                << io::format_g6(p_star) << ',' << io::format_g6(pt.y) << '\n';
        }
        raw.push_back(curve.points);
        rescaled.push_back(std::move(r));
    }
    write_text_file(out, csv.str());

    const auto fit = fit_collapse(collapse_points);
    const auto raw_fit = fit_logistic(raw_points);
    const auto [before, after] = collapse_dispersion(raw, rescaled);

    json report;
    report["r"] = json_num(fit.r);
    report["k"] = json_num(fit.k);
    report["residual"] = json_num(fit.residual);
    report["raw_logistic_residual"] = json_num(raw_fit.residual);
    report["dispersion_before"] = json_num(before);
    report["dispersion_after"] = json_num(after);
    emit_report(report, fit_out);

    Manifest manifest;
    manifest.command = "collapse";
    manifest.input("sweep", sweep_file);
    manifest.input("prestige", prestige_file);
    manifest.parameters = {{"out", out}, {"fit_out", fit_out}};
    manifest.write(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Faculty hiring network toolkit: prestige ranking, topic adoption "
                 "detection, SI spreading simulations, and the prestige-quality collapse"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // rank
    auto* rank = app.add_subcommand("rank", "estimate prestige by minimum-violation ranking");
    std::string r_vertices, r_edges, r_out, r_matrix_out;
    std::size_t r_restarts = 100, r_steps = 50000;
    std::uint64_t r_seed = 0;
    CommonArgs r_common;
    with_env(rank->add_option("--vertices", r_vertices)->required(), "vertices");
    with_env(rank->add_option("--edges", r_edges)->required(), "edges");
    with_env(rank->add_option("--restarts", r_restarts, "random restarts"), "restarts");
    with_env(rank->add_option("--steps", r_steps, "proposals per restart"), "steps");
    with_env(rank->add_option("--master-seed", r_seed)->required(), "master-seed");
    with_env(rank->add_option("--out", r_out, "prestige CSV path")->required(), "out");
    with_env(rank->add_option("--decile-matrix-out", r_matrix_out,
                              "also export the 10x10 decile density matrix"),
             "decile-matrix-out");
    add_workers(rank, r_common);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep over seeds and (p, q)");
    std::string s_vertices, s_edges, s_p = "0.1", s_q = "0", s_out, s_deciles_out, s_prestige;
    bool s_all_seeds = false, s_rank = false;
    std::vector<NodeId> s_seeds;
    std::uint64_t s_trials = 0, s_seed = 0;
    std::size_t s_restarts = 100, s_steps = 50000;
    CommonArgs s_common;
    with_env(sw->add_option("--vertices", s_vertices)->required(), "vertices");
    with_env(sw->add_option("--edges", s_edges)->required(), "edges");
    with_env(sw->add_option("--p-grid", s_p, "a:b:step, comma list, or one value"), "p-grid");
    with_env(sw->add_option("--q-grid", s_q, "a:b:step, comma list, or one value"), "q-grid");
    sw->add_flag("--all-seeds", s_all_seeds, "simulate from every node");
    with_env(sw->add_option("--seed-node", s_seeds, "explicit seed nodes"), "seed-node");
    with_env(sw->add_option("--trials", s_trials)->required(), "trials");
    with_env(sw->add_option("--master-seed", s_seed)->required(), "master-seed");
    with_env(sw->add_option("--out", s_out)->required(), "out");
    with_env(sw->add_option("--deciles-out", s_deciles_out, "per-decile curve CSV"), "deciles-out");
    with_env(sw->add_option("--prestige", s_prestige, "prestige CSV from `rank`"), "prestige");
    sw->add_flag("--rank", s_rank, "estimate prestige inline when needed");
    with_env(sw->add_option("--restarts", s_restarts), "restarts");
    with_env(sw->add_option("--steps", s_steps), "steps");
    add_workers(sw, s_common);

    // simulate
    auto* sim = app.add_subcommand("simulate", "summary statistics for one (seed, p, q)");
    std::string m_vertices, m_edges, m_out;
    NodeId m_node = 0;
    double m_p = 0.1, m_q = 0.0;
    std::uint64_t m_trials = 0, m_seed = 0;
    with_env(sim->add_option("--vertices", m_vertices)->required(), "vertices");
    with_env(sim->add_option("--edges", m_edges)->required(), "edges");
    with_env(sim->add_option("--seed-node", m_node)->required(), "seed-node");
    with_env(sim->add_option("--p", m_p)->required(), "p");
    with_env(sim->add_option("--q", m_q), "q");
    with_env(sim->add_option("--trials", m_trials)->required(), "trials");
    with_env(sim->add_option("--master-seed", m_seed)->required(), "master-seed");
    with_env(sim->add_option("--out", m_out, "JSON path (default: stdout)"), "out");

    // adopt
    auto* ad = app.add_subcommand("adopt", "classify how each department adopted a topic");
    CorpusArgs a_args;
    std::string a_out, a_arrows;
    with_env(ad->add_option("--careers", a_args.careers)->required(), "careers");
    with_env(ad->add_option("--keywords", a_args.keywords)->required(), "keywords");
    with_env(ad->add_option("--topic", a_args.topic, "topic name (default: keyword file stem)"),
             "topic");
    with_env(ad->add_option("--grace", a_args.grace, "prior-work window after hiring, years"),
             "grace");
    with_env(ad->add_option("--out", a_out)->required(), "out");
    with_env(ad->add_option("--arrows-out", a_arrows, "transmission arrows CSV"), "arrows-out");

    // permtest
    auto* pt = app.add_subcommand("permtest", "permutation null for the hiring fraction");
    CorpusArgs p_args;
    std::string p_out;
    std::size_t p_nperms = 100;
    std::uint64_t p_seed = 0;
    CommonArgs p_common;
    with_env(pt->add_option("--careers", p_args.careers)->required(), "careers");
    with_env(pt->add_option("--keywords", p_args.keywords)->required(), "keywords");
    with_env(pt->add_option("--topic", p_args.topic), "topic");
    with_env(pt->add_option("--grace", p_args.grace), "grace");
    with_env(pt->add_option("--n-perms", p_nperms), "n-perms");
    with_env(pt->add_option("--master-seed", p_seed)->required(), "master-seed");
    with_env(pt->add_option("--out", p_out, "JSON path (default: stdout)"), "out");
    add_workers(pt, p_common);

    // collapse
    auto* co = app.add_subcommand("collapse", "rescale decile curves by p* and fit the master curve");
    std::string c_sweep, c_prestige, c_out, c_fit_out;
    with_env(co->add_option("--sweep", c_sweep, "sweep CSV")->required(), "sweep");
    with_env(co->add_option("--prestige", c_prestige, "prestige CSV")->required(), "prestige");
    with_env(co->add_option("--out", c_out, "collapsed CSV")->required(), "out");
    with_env(co->add_option("--fit-out", c_fit_out, "fit JSON (default: stdout)"), "fit-out");

    try {
        app.parse(argc, argv);
        if (rank->parsed())
            return cmd_rank(r_vertices, r_edges, r_restarts, r_steps, r_seed, r_out, r_matrix_out,
                            r_common.workers);
        if (sw->parsed())
            return cmd_sweep(s_vertices, s_edges, s_p, s_q, s_all_seeds, s_seeds, s_trials, s_seed,
                             s_out, s_deciles_out, s_prestige, s_rank, s_restarts, s_steps,
                             s_common.workers);
        if (sim->parsed())
            return cmd_simulate(m_vertices, m_edges, m_node, m_p, m_q, m_trials, m_seed, m_out);
        if (ad->parsed()) return cmd_adopt(a_args, a_out, a_arrows);
        if (pt->parsed()) return cmd_permtest(p_args, p_nperms, p_seed, p_out, p_common.workers);
        if (co->parsed()) return cmd_collapse(c_sweep, c_prestige, c_out, c_fit_out);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const load_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
