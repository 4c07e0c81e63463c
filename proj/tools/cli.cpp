#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdiscount/qdiscount.hpp"

namespace qdiscount::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_double(p));
    return out;
}

/// "amount@time"
ScheduledReward parse_reward(const std::string& text) {
    const auto at = text.find('@');
    if (at == std::string::npos) throw FormatError("reward must be written amount@time, got '" + text + "'");
    return {parse_double(text.substr(0, at)), parse_double(text.substr(at + 1))};
}

std::vector<ModelFamily> parse_families(const std::string& text) {
    std::vector<ModelFamily> out;
    for (const auto& name : split(text, ',')) {
        const auto f = parse_family(name);
        if (!f) throw FormatError("unknown model family '" + name + "'");
        out.push_back(*f);
    }
    if (out.empty()) throw FormatError("no model families given");
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot write '" + path + "'");
    return f;
}

double relative_residual(double closed, const DecompositionReport& d) {
    const double scale = std::max(std::abs(closed), std::abs(d.value_term) + std::abs(d.time_term));
    return scale == 0.0 ? 0.0 : std::abs(closed - d.total) / scale;
}

struct EvalOpts {
    std::string spec;
    double from = 0.0, to = 10.0;
    std::size_t samples = 101;
    std::string format = "csv";
};

struct TableOpts {
    std::string spec;
    double t = 0.0;
};

struct FitOpts {
    std::string data;
    std::optional<double> v0;
    std::string v0_file;
    std::string families;
    FitConfig cfg;
};

struct SimulateOpts {
    std::string spec;
    std::string delays;
    double noise_beta = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> amount, start_step, min_step;
    std::size_t max_trials = 10000;
    std::size_t threads = 1;
    std::string traces = "traces.jsonl";
    std::string dataset = "dataset.csv";
    std::string sidecar;
};

struct GenerateOpts {
    std::string spec;
    std::string delays;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

struct ReversalOpts {
    std::string spec;
    std::string smaller, larger;
};

struct ReconstructOpts {
    std::string spec;
    double from = 0.0, to = 100.0;
    std::size_t steps = kDefaultReconstructionSteps;
};

void cmd_eval(const EvalOpts& o, std::ostream& out) {
    const ModelSpec spec = read_spec_file(o.spec);
    const auto rows = sample_curve(spec, o.from, o.to, o.samples);
    if (o.format == "json") {
        out << curve_to_json(rows).dump(2) << '\n';
    } else {
        write_curve_csv(out, rows);
    }
}

void cmd_table(const TableOpts& o, std::ostream& out) {
    const ModelSpec base = read_spec_file(o.spec);
    out << "cell,q,s,v,i,inc,inc_value_term,inc_time_term,residual,status\n";
    for (Cell cell : kAllCells) {
        const ModelSpec spec = project_to_cell(base, cell);
        out << cell_name(cell) << ',' << format_double(spec.q) << ','
            << (spec.time ? format_double(spec.time->s) : std::string("")) << ',';
        try {
            const CurveSample s = sample_point(spec, o.t);
            const DecompositionReport d = decompose_inconsistency(spec, o.t);
            out << format_double(s.v) << ',' << format_double(s.i) << ',' << format_double(s.inc) << ','
                << format_double(d.value_term) << ',' << format_double(d.time_term) << ','
                << format_double(relative_residual(s.inc, d)) << ",ok\n";
        } catch (const Divergence&) {
            out << ",,,,,,divergent\n";
        }
    }
}

IndifferenceDataset load_dataset(const FitOpts& o) {
    double v0;
    if (o.v0) {
        v0 = *o.v0;
    } else if (!o.v0_file.empty()) {
        v0 = read_v0_sidecar(o.v0_file);
    } else {
        throw FormatError("objective value required: pass --v0 or --v0-file");
    }
    std::ifstream in(o.data);
    if (!in) throw FormatError("cannot open dataset '" + o.data + "'");
    return read_dataset_csv(in, v0);
}

void cmd_fit(const FitOpts& o, bool rank, std::ostream& out) {
    const IndifferenceDataset data = load_dataset(o);
    const std::vector<ModelFamily> families =
        o.families.empty() ? std::vector<ModelFamily>(kAllFamilies.begin(), kAllFamilies.end())
                           : parse_families(o.families);
    std::vector<FitResult> results;
    if (rank) {
        results = compare_models(data, families, o.cfg);
    } else {
        for (ModelFamily f : families) {
            try {
                results.push_back(fit_model(data, f, o.cfg));
            } catch (const InsufficientData&) {
                throw;
            } catch (const Error& e) {
                FitResult failed;
                failed.family = f;
                failed.error = e.what();
                results.push_back(std::move(failed));
            }
        }
    }
    json report = {{"v0", data.v0}, {"n", data.points.size()}, {"seed", o.cfg.seed}, {"results", json::array()}};
    for (const auto& r : results) report["results"].push_back(fit_result_to_json(r));
    out << report.dump(2) << '\n';
}

void cmd_simulate(const SimulateOpts& o, std::ostream& err) {
    const ModelSpec spec = read_spec_file(o.spec);
    const std::vector<double> delays = parse_list(o.delays);
    if (delays.empty()) throw FormatError("--delays must list at least one delay");
    const double amount = o.amount.value_or(spec.v0);
    TitrationConfig cfg = TitrationConfig::with_defaults(delays, amount);
    if (o.start_step) cfg.start_step = *o.start_step;
    if (o.min_step) cfg.min_step = *o.min_step;
    cfg.max_trials = o.max_trials;

    const ChoiceAgent agent{spec, o.noise_beta, o.seed};
    const auto traces = run_titration(cfg, agent, o.threads);
    const IndifferenceDataset data = dataset_from_traces(traces, amount);

    {
        auto f = open_output(o.traces);
        write_traces_jsonl(f, traces);
    }
    {
        auto f = open_output(o.dataset);
        write_dataset_csv(f, data);
    }
    if (!o.sidecar.empty()) {
        auto f = open_output(o.sidecar);
        f << json{{"v0", amount}}.dump() << '\n';
    }
    err << "simulated " << traces.size() << " delays -> " << o.traces << ", " << o.dataset << '\n';
}

void cmd_generate(const GenerateOpts& o, std::ostream& out) {
    const ModelSpec spec = read_spec_file(o.spec);
    const std::vector<double> delays = parse_list(o.delays);
    if (delays.empty()) throw FormatError("--delays must list at least one delay");
    const IndifferenceDataset data = generate_dataset(spec, delays, o.noise_sigma, o.seed);
    if (o.output.empty()) {
        write_dataset_csv(out, data);
    } else {
        auto f = open_output(o.output);
        write_dataset_csv(f, data);
    }
}

void cmd_reversal(const ReversalOpts& o, std::ostream& out) {
    const ModelSpec spec = read_spec_file(o.spec);
    const ScheduledReward smaller = parse_reward(o.smaller);
    const ScheduledReward larger = parse_reward(o.larger);
    try {
        const double t = crossing_time(smaller, larger, spec);
        out << format_double(t) << '\n';
    } catch (const NoCrossing&) {
        out << "no crossing\n";
    }
}

void cmd_reconstruct(const ReconstructOpts& o, std::ostream& out, std::ostream& err) {
    const ModelSpec spec = read_spec_file(o.spec);
    const ReconstructionResult rec = reconstruct_from_inconsistency(spec, o.from, o.to, o.steps);
    write_reconstruction_csv(out, rec);
    err << "max_rate_error=" << format_double(rec.max_rate_error)
        << " max_value_error=" << format_double(rec.max_value_error) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intertemporal discounting with deformed exponentials and psychophysical time"};
    app.name("qdiscount");
    app.require_subcommand(1);

    EvalOpts eval;
    auto* sub_eval = app.add_subcommand("eval", "Sample V, I, dI/dt and its decomposition on a uniform grid");
    sub_eval->add_option("spec", eval.spec, "Model spec JSON")->required();
    sub_eval->add_option("--from", eval.from, "Grid start");
    sub_eval->add_option("--to", eval.to, "Grid end");
    sub_eval->add_option("--samples", eval.samples, "Number of grid points")->check(CLI::PositiveNumber);
    sub_eval->add_option("--format", eval.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    TableOpts table;
    auto* sub_table = app.add_subcommand("table", "Evaluate all twelve value x time cells at one delay");
    sub_table->add_option("spec", table.spec, "Model spec JSON")->required();
    sub_table->add_option("-t,--t", table.t, "Delay")->required();

    FitOpts fit;
    auto add_fit_options = [&](CLI::App* sub) {
        sub->add_option("data", fit.data, "Dataset CSV with header delay,value")->required();
        sub->add_option("--v0", fit.v0, "Objective reward value");
        sub->add_option("--v0-file", fit.v0_file, "JSON sidecar {\"v0\": ...}");
        sub->add_option("--families", fit.families, "Comma-separated families (default: all)");
        sub->add_option("--seed", fit.cfg.seed, "Restart seed");
        sub->add_option("--restarts", fit.cfg.restarts, "Multi-start count")->check(CLI::PositiveNumber);
        sub->add_option("--max-evals", fit.cfg.max_evals, "Objective evaluations per restart");
        sub->add_option("--tolerance", fit.cfg.tolerance, "Simplex size tolerance");
        sub->add_option("--threads", fit.cfg.threads, "Worker threads");
    };
    auto* sub_fit = app.add_subcommand("fit", "Fit model families to indifference points");
    add_fit_options(sub_fit);
    auto* sub_compare = app.add_subcommand("compare", "Fit and rank model families by AIC");
    add_fit_options(sub_compare);

    SimulateOpts sim;
    auto* sub_sim = app.add_subcommand("simulate", "Run adjusting-amount titration with a model agent");
    sub_sim->add_option("spec", sim.spec, "Model spec JSON")->required();
    sub_sim->add_option("--delays", sim.delays, "Comma-separated delays")->required();
    sub_sim->add_option("--noise-beta", sim.noise_beta, "Logistic choice temperature (0 = deterministic)");
    sub_sim->add_option("--seed", sim.seed, "Agent seed");
    sub_sim->add_option("--amount", sim.amount, "Delayed reward amount (default: spec v0)");
    sub_sim->add_option("--start-step", sim.start_step, "Initial staircase step (default: amount/20)");
    sub_sim->add_option("--min-step", sim.min_step, "Final staircase step (default: amount/200)");
    sub_sim->add_option("--max-trials", sim.max_trials, "Trial budget per delay");
    sub_sim->add_option("--threads", sim.threads, "Worker threads");
    sub_sim->add_option("--traces", sim.traces, "Trace JSONL output path");
    sub_sim->add_option("--dataset", sim.dataset, "Dataset CSV output path");
    sub_sim->add_option("--sidecar", sim.sidecar, "Optional {\"v0\": ...} output path");

    GenerateOpts gen;
    auto* sub_gen = app.add_subcommand("generate", "Sample a noisy dataset directly from the model");
    sub_gen->add_option("spec", gen.spec, "Model spec JSON")->required();
    sub_gen->add_option("--delays", gen.delays, "Comma-separated, strictly increasing delays")->required();
    sub_gen->add_option("--noise-sigma", gen.noise_sigma, "Gaussian noise standard deviation");
    sub_gen->add_option("--seed", gen.seed, "Noise seed");
    sub_gen->add_option("-o,--output", gen.output, "Output path (default: stdout)");

    ReversalOpts rev;
    auto* sub_rev = app.add_subcommand("reversal", "Decision instant where two scheduled rewards trade places");
    sub_rev->add_option("spec", rev.spec, "Model spec JSON")->required();
    sub_rev->add_option("--smaller", rev.smaller, "Smaller-sooner reward, amount@time")->required();
    sub_rev->add_option("--larger", rev.larger, "Larger-later reward, amount@time")->required();

    ReconstructOpts rec;
    auto* sub_rec = app.add_subcommand("reconstruct", "Integrate the decomposed inconsistency back to I and V");
    sub_rec->add_option("spec", rec.spec, "Model spec JSON")->required();
    sub_rec->add_option("--from", rec.from, "Start time");
    sub_rec->add_option("--to", rec.to, "End time");
    sub_rec->add_option("--steps", rec.steps, "RK4 steps");

    std::vector<const char*> argv{"qdiscount"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        if (sub_eval->parsed()) cmd_eval(eval, out);
        else if (sub_table->parsed()) cmd_table(table, out);
        else if (sub_fit->parsed()) cmd_fit(fit, false, out);
        else if (sub_compare->parsed()) cmd_fit(fit, true, out);
        else if (sub_sim->parsed()) cmd_simulate(sim, err);
        else if (sub_gen->parsed()) cmd_generate(gen, out);
        else if (sub_rev->parsed()) cmd_reversal(rev, out);
        else if (sub_rec->parsed()) cmd_reconstruct(rec, out, err);
    } catch (const Divergence& e) {
        err << "error: " << e.what() << " at t=" << format_double(e.time()) << '\n';
        return kNumericalFailure;
    } catch (const StepFailure& e) {
        err << "error: " << e.what() << " at t=" << format_double(e.time()) << '\n';
        return kNumericalFailure;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kOk;
}

}  // namespace qdiscount::cli
