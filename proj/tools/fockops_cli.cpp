// Command-line front end: photon-number distributions, Wigner grids and
// Mandel-Q sweeps of photon-added/subtracted thermal and even-coherent
// states, plus the figure reproduction sets and the closed-form-vs-oracle
// validation harness.
//
// Exit codes: 0 success, 1 validation failure, 2 usage/config error,
// 3 degenerate (null) state.

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockops/io.hpp"
#include "fockops/observables.hpp"
#include "fockops/states.hpp"
#include "fockops/validation.hpp"
#include "fockops/version.hpp"

namespace {

using namespace fockops;
namespace fs = std::filesystem;

struct run_config {
    std::string family = "thermal";
    std::string order = "sa";
    unsigned p = 0;
    unsigned q = 0;
    double nbar = 0.25;
    double alpha_re = 1.0;
    double alpha_im = 0.0;
    double grid_min = -3.0;
    double grid_max = 3.0;
    std::size_t grid_points = 81;
    double sweep_min = 0.01;
    double sweep_max = 1.0;
    std::size_t sweep_points = 50;
    std::string out;
    std::string format = "csv";
    double tail_tol = 1e-14;
};

state_spec spec_of(const run_config& cfg) {
    if (cfg.family == "thermal") return state_spec::make_thermal(cfg.nbar);
    if (cfg.family == "ecs")
        return state_spec::make_even_coherent(complexd{cfg.alpha_re, cfg.alpha_im});
    throw CLI::ValidationError("--family", "must be thermal or ecs");
}

op_sequence seq_of(const run_config& cfg) {
    op_sequence seq;
    seq.p = cfg.p;
    seq.q = cfg.q;
    if (cfg.order == "sa")
        seq.order = op_order::add_then_subtract;
    else if (cfg.order == "as")
        seq.order = op_order::subtract_then_add;
    else
        throw CLI::ValidationError("--order", "must be sa or as");
    return seq;
}

// Writes to the path, or stdout when none given.
void emit(const std::string& out, const std::string& payload) {
    if (out.empty() || out == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open output file: " + out);
    os << payload;
    if (!os) throw std::ios_base::failure("write failed: " + out);
}

nlohmann::json base_manifest(const run_config& cfg, std::size_t cutoff) {
    nlohmann::json j;
    j["version"] = FOCKOPS_VERSION;
    j["family"] = cfg.family;
    j["order"] = cfg.order;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    if (cfg.family == "thermal") {
        j["nbar"] = cfg.nbar;
    } else {
        j["alpha_re"] = cfg.alpha_re;
        j["alpha_im"] = cfg.alpha_im;
    }
    j["tail_tol"] = cfg.tail_tol;
    j["cutoff"] = cutoff;
    return j;
}

int run_pnd(const run_config& cfg) {
    const auto spec = spec_of(cfg);
    const auto seq = seq_of(cfg);
    const auto cutoff = choose_cutoff(spec, seq, cfg.tail_tol);
    auto [state, record] = transform(build_seed(spec, cutoff), seq);
    const auto probs = pnd(state);
    std::ostringstream payload;
    if (cfg.format == "json") {
        nlohmann::json j = base_manifest(cfg, cutoff);
        j["probability"] = probs;
        payload << j.dump(2) << '\n';
    } else {
        write_pnd_csv(payload, probs);
    }
    emit(cfg.out, payload.str());
    return 0;
}

int run_wigner(const run_config& cfg) {
    const auto spec = spec_of(cfg);
    const auto seq = seq_of(cfg);
    grid_spec grid;
    grid.re_min = grid.im_min = cfg.grid_min;
    grid.re_max = grid.im_max = cfg.grid_max;
    grid.points_per_axis = cfg.grid_points;
    const auto values = evaluate_wigner_grid(spec, seq, grid, cfg.tail_tol);
    std::ostringstream payload;
    if (cfg.format == "json") {
        nlohmann::json j = base_manifest(cfg, choose_cutoff(spec, seq, cfg.tail_tol));
        j["re_min"] = values.re_min;
        j["re_max"] = values.re_max;
        j["im_min"] = values.im_min;
        j["im_max"] = values.im_max;
        j["points_per_axis"] = values.points_per_axis;
        j["w"] = values.values;
        payload << j.dump(2) << '\n';
    } else {
        write_wigner_csv(payload, values);
    }
    emit(cfg.out, payload.str());
    return 0;
}

int run_q_sweep(const run_config& cfg) {
    if (cfg.sweep_points < 2) throw CLI::ValidationError("--sweep-points", "need at least 2 points");
    const auto seq = seq_of(cfg);
    std::vector<double> xs(cfg.sweep_points);
    std::vector<double> qs(cfg.sweep_points);
    std::vector<std::optional<double>> q_closed(cfg.sweep_points);
    bool any_closed = false;
    for (std::size_t i = 0; i < cfg.sweep_points; ++i) {
        const double x = cfg.sweep_min +
                         (cfg.sweep_max - cfg.sweep_min) * static_cast<double>(i) /
                             static_cast<double>(cfg.sweep_points - 1);
        xs[i] = x;
        const state_spec spec = (cfg.family == "thermal")
                                    ? state_spec::make_thermal(x)
                                    : state_spec::make_even_coherent(complexd{x, 0.0});
        const auto cutoff = choose_cutoff(spec, seq, cfg.tail_tol);
        auto [state, record] = transform(build_seed(spec, cutoff), seq);
        qs[i] = mandel_q(state).q;
        try {
            if (cfg.family == "thermal") {
                q_closed[i] = mandel_q_closed_thermal(x, seq);
            } else {
                const auto m = ecs_moments_closed(complexd{x, 0.0}, seq);
                q_closed[i] = m.second_factorial_moment / m.mean_n - m.mean_n;
            }
            any_closed = true;
        } catch (const singular_parameter&) {
            q_closed[i] = std::nullopt;
        }
    }
    std::ostringstream payload;
    if (cfg.format == "json") {
        nlohmann::json j;
        j["version"] = FOCKOPS_VERSION;
        j["family"] = cfg.family;
        j["order"] = cfg.order;
        j["p"] = cfg.p;
        j["q"] = cfg.q;
        j["x"] = xs;
        j["q_values"] = qs;
        if (any_closed) {
            nlohmann::json closed = nlohmann::json::array();
            for (const auto& v : q_closed)
                closed.push_back(v.has_value() ? nlohmann::json(*v) : nlohmann::json());
            j["q_closed"] = std::move(closed);
        }
        payload << j.dump(2) << '\n';
    } else {
        write_sweep_csv(payload, xs, qs, any_closed ? &q_closed : nullptr);
    }
    emit(cfg.out, payload.str());
    return 0;
}

struct figure_panel {
    std::string name;
    std::string kind;  // pnd | wigner | q-sweep
    run_config cfg;
};

std::vector<figure_panel> figure_panels(int figure) {
    std::vector<figure_panel> panels;
    auto panel = [&](std::string name, std::string kind, run_config cfg) {
        panels.push_back(figure_panel{std::move(name), std::move(kind), std::move(cfg)});
    };
    run_config base;
    switch (figure) {
        case 1: {  // thermal PND, nbar = 0.25
            base.family = "thermal";
            base.nbar = 0.25;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 2, 2}, {'b', "sa", 4, 2}, {'c', "sa", 8, 6},
                {'d', "as", 2, 2}, {'e', "as", 4, 2}, {'f', "as", 8, 6}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig1_") + tag, "pnd", cfg);
            }
            break;
        }
        case 2: {  // thermal Wigner, nbar = 0.04
            base.family = "thermal";
            base.nbar = 0.04;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 1, 1}, {'b', "sa", 4, 12}, {'c', "sa", 8, 12},
                {'d', "as", 1, 1}, {'e', "as", 2, 4},  {'f', "as", 2, 6}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig2_") + tag, "wigner", cfg);
            }
            break;
        }
        case 3: {  // thermal Q sweeps over nbar
            base.family = "thermal";
            base.sweep_min = 0.01;
            base.sweep_max = 1.0;
            base.sweep_points = 50;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 6, 2}, {'b', "sa", 8, 2}, {'c', "as", 4, 2}, {'d', "as", 6, 2}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig3_") + tag, "q-sweep", cfg);
            }
            break;
        }
        case 4: {  // ECS PND, |alpha|^2 = 4
            base.family = "ecs";
            base.alpha_re = 2.0;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 1, 1}, {'b', "sa", 8, 4}, {'c', "sa", 16, 4},
                {'d', "as", 1, 1}, {'e', "as", 4, 8}, {'f', "as", 4, 12}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig4_") + tag, "pnd", cfg);
            }
            break;
        }
        case 5: {  // ECS Wigner, alpha = 1
            base.family = "ecs";
            base.alpha_re = 1.0;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 1, 1}, {'b', "sa", 2, 1}, {'c', "sa", 3, 1},
                {'d', "as", 1, 1}, {'e', "as", 2, 1}, {'f', "as", 3, 1}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig5_") + tag, "wigner", cfg);
            }
            break;
        }
        case 6: {  // photon-added-only ECS, alpha = 0.1
            base.family = "ecs";
            base.alpha_re = 0.1;
            base.order = "sa";
            base.q = 0;
            for (const auto& [tag, p] : std::vector<std::pair<char, unsigned>>{{'a', 1}, {'b', 5}}) {
                run_config cfg = base;
                cfg.p = p;
                panel(std::string("fig6_") + tag, "wigner", cfg);
            }
            break;
        }
        case 7: {  // ECS Q sweeps over |alpha|
            base.family = "ecs";
            base.sweep_min = 0.05;
            base.sweep_max = 2.0;
            base.sweep_points = 50;
            const std::vector<std::tuple<char, std::string, unsigned, unsigned>> sets = {
                {'a', "sa", 2, 1}, {'b', "sa", 1, 2}, {'c', "as", 2, 1}, {'d', "as", 1, 2}};
            for (const auto& [tag, order, p, q] : sets) {
                run_config cfg = base;
                cfg.order = order;
                cfg.p = p;
                cfg.q = q;
                panel(std::string("fig7_") + tag, "q-sweep", cfg);
            }
            break;
        }
        default:
            throw CLI::ValidationError("figure", "figure id must be in 1..7");
    }
    return panels;
}

int run_figure(int figure, const std::string& out_dir, double tail_tol) {
    const auto panels = figure_panels(figure);
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["version"] = FOCKOPS_VERSION;
    manifest["figure"] = figure;
    nlohmann::json files = nlohmann::json::object();
    for (auto panel : panels) {
        panel.cfg.tail_tol = tail_tol;
        panel.cfg.format = "csv";
        panel.cfg.out = (dir / (panel.name + ".csv")).string();
        if (panel.kind == "pnd")
            run_pnd(panel.cfg);
        else if (panel.kind == "wigner")
            run_wigner(panel.cfg);
        else
            run_q_sweep(panel.cfg);
        nlohmann::json entry;
        entry["kind"] = panel.kind;
        entry["family"] = panel.cfg.family;
        entry["order"] = panel.cfg.order;
        entry["p"] = panel.cfg.p;
        entry["q"] = panel.cfg.q;
        entry["tail_tol"] = panel.cfg.tail_tol;
        if (panel.cfg.family == "thermal") {
            entry["nbar"] = panel.cfg.nbar;
        } else {
            entry["alpha_re"] = panel.cfg.alpha_re;
            entry["alpha_im"] = panel.cfg.alpha_im;
        }
        const auto spec = spec_of(panel.cfg);
        const auto seq = seq_of(panel.cfg);
        if (panel.kind != "q-sweep") entry["cutoff"] = choose_cutoff(spec, seq, panel.cfg.tail_tol);
        if (panel.kind == "wigner") {
            entry["grid_min"] = panel.cfg.grid_min;
            entry["grid_max"] = panel.cfg.grid_max;
            entry["grid_points"] = panel.cfg.grid_points;
        }
        if (panel.kind == "q-sweep") {
            entry["sweep_min"] = panel.cfg.sweep_min;
            entry["sweep_max"] = panel.cfg.sweep_max;
            entry["sweep_points"] = panel.cfg.sweep_points;
        }
        files[panel.name + ".csv"] = std::move(entry);
    }
    manifest["files"] = std::move(files);
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open manifest.json");
    os << manifest.dump(2) << '\n';
    if (!os) throw std::ios_base::failure("manifest write failed");
    return 0;
}

int run_validate(const std::string& out) {
    const std::string path = out.empty() ? "validation_report.json" : out;
    std::ofstream os(path, std::ios::binary);  // fail before the long run
    if (!os) throw std::ios_base::failure("cannot open report file: " + path);
    const auto report = run_full_validation();
    os << to_json(report).dump(2) << '\n';
    if (!os) throw std::ios_base::failure("report write failed: " + path);
    std::cout << "validation: " << report.count("pass") << " pass, " << report.count("fail")
              << " fail, " << report.count("singular-branch") << " singular-branch, "
              << report.count("flagged-paper-discrepancy") << " flagged-paper-discrepancy\n"
              << "report written to " << path << '\n';
    return report.ok() ? 0 : 1;
}

void add_state_flags(CLI::App* cmd, run_config& cfg) {
    cmd->add_option("--family", cfg.family, "seed family: thermal | ecs")
        ->check(CLI::IsMember({"thermal", "ecs"}));
    cmd->add_option("--order", cfg.order, "operation order: sa (add, then subtract) | as")
        ->check(CLI::IsMember({"sa", "as"}));
    cmd->add_option("--p", cfg.p, "photons added");
    cmd->add_option("--q", cfg.q, "photons subtracted");
    cmd->add_option("--nbar", cfg.nbar, "thermal mean photon number");
    cmd->add_option("--alpha-re", cfg.alpha_re, "Re(alpha) of the even coherent seed");
    cmd->add_option("--alpha-im", cfg.alpha_im, "Im(alpha) of the even coherent seed");
    cmd->add_option("--tail-tol", cfg.tail_tol, "seed tail tolerance for the cutoff choice")
        ->check(CLI::Range(1e-300, 0.999));
    cmd->add_option("--out", cfg.out, "output file (stdout when omitted)");
    cmd->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photon addition/subtraction toolkit for thermal and even coherent states"};
    app.set_version_flag("--version", FOCKOPS_VERSION);
    app.require_subcommand(1);

    run_config pnd_cfg;
    auto* pnd_cmd = app.add_subcommand("pnd", "photon-number distribution of the transformed state");
    add_state_flags(pnd_cmd, pnd_cfg);

    run_config wig_cfg;
    auto* wig_cmd = app.add_subcommand("wigner", "Wigner function on a phase-space grid");
    add_state_flags(wig_cmd, wig_cfg);
    wig_cmd->add_option("--grid-min", wig_cfg.grid_min, "lower grid bound (both axes)");
    wig_cmd->add_option("--grid-max", wig_cfg.grid_max, "upper grid bound (both axes)");
    wig_cmd->add_option("--grid-points", wig_cfg.grid_points, "points per axis")
        ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));

    run_config sweep_cfg;
    auto* sweep_cmd = app.add_subcommand("q-sweep", "Mandel Q against nbar (thermal) or |alpha| (ecs)");
    add_state_flags(sweep_cmd, sweep_cfg);
    sweep_cmd->add_option("--sweep-min", sweep_cfg.sweep_min, "sweep lower bound");
    sweep_cmd->add_option("--sweep-max", sweep_cfg.sweep_max, "sweep upper bound");
    sweep_cmd->add_option("--sweep-points", sweep_cfg.sweep_points, "number of sweep points")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));

    int figure_id = 0;
    std::string figure_out;
    double figure_tail_tol = 1e-14;
    auto* fig_cmd = app.add_subcommand("figure", "write the data files behind one figure");
    fig_cmd->add_option("id", figure_id, "figure id (1..7)")->required()->check(CLI::Range(1, 7));
    fig_cmd->add_option("--out", figure_out, "output directory (default: current)");
    fig_cmd->add_option("--tail-tol", figure_tail_tol, "seed tail tolerance")
        ->check(CLI::Range(1e-300, 0.999));

    std::string validate_out;
    auto* val_cmd = app.add_subcommand("validate", "run the closed-form-vs-oracle validation matrix");
    val_cmd->add_option("--out", validate_out, "report path (default validation_report.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pnd_cmd->parsed()) return run_pnd(pnd_cfg);
        if (wig_cmd->parsed()) return run_wigner(wig_cfg);
        if (sweep_cmd->parsed()) return run_q_sweep(sweep_cfg);
        if (fig_cmd->parsed()) return run_figure(figure_id, figure_out, figure_tail_tol);
        if (val_cmd->parsed()) return run_validate(validate_out);
    } catch (const null_state& e) {
        std::cerr << "error: degenerate state: " << e.what() << '\n';
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fockops::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
