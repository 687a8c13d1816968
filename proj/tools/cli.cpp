#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "qsynth/analyzer.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/evaluator.hpp"
#include "qsynth/gatelist.hpp"
#include "qsynth/llm_client.hpp"
#include "qsynth/optimizer.hpp"
#include "qsynth/proposer.hpp"
#include "qsynth/runstore.hpp"

namespace qsynth::cli {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RunStoreError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RunStoreError("cannot write " + path);
    out << text;
    if (!out) throw RunStoreError("failed writing " + path);
}

// Highest wire mentioned plus one, at least 2.
int infer_qubits(const Circuit& circuit) {
    int highest = 1;
    for (const Gate& g : circuit.gates) {
        for (int w : g.wires()) highest = std::max(highest, w);
    }
    return highest + 1;
}

Circuit load_circuit(const std::string& path, int qubits) {
    const std::string text = read_text(path);
    auto parsed = parse_proposal(text, qubits > 0 ? qubits : kMaxQubits);
    if (!parsed) throw ParameterError(path + ": " + parsed.error().describe());
    Circuit circuit = std::move(parsed).value();
    if (qubits <= 0) circuit.num_qubits = infer_qubits(circuit);
    if (auto v = validate(circuit); !v) throw ParameterError(path + ": " + v.describe());
    return circuit;
}

AngleSet parse_angles(const std::string& list) {
    std::vector<double> values;
    std::stringstream stream(list);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t{}"));
        item.erase(item.find_last_not_of(" \t{}") + 1);
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ParameterError("bad angle '" + item + "' in --angles");
        values.push_back(v);
    }
    return AngleSet(std::move(values));
}

EvaluatorKind evaluator_kind(const std::string& name) {
    if (name == "factored") return EvaluatorKind::Factored;
    if (name == "dense") return EvaluatorKind::Dense;
    if (name == "dense-f32") return EvaluatorKind::DenseF32;
    throw ParameterError("unknown evaluator '" + name + "' (factored, dense, dense-f32)");
}

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

void print_report(std::ostream& out, const MWReport& report) {
    out << "q = " << fixed(report.q, 4) << "\n";
    out << "q (full precision) = " << std::setprecision(17) << report.q << "\n";
    out << "purities:\n";
    for (std::size_t i = 0; i < report.purities.size(); ++i) {
        out << "  " << std::setw(2) << i << "  " << fixed(report.purities[i], 6) << "\n";
    }
}

struct SynthOptions {
    int qubits = 25;
    int gates = 25;
    int queries = 3;
    int steps = 15;
    std::string proposer = "hillclimb";
    bool feedback = false;
    bool loose = false;
    std::string angles;
    std::uint64_t seed = 0;
    std::string init;
    std::string out;
    std::string label;
    std::string script;
    std::string evaluator = "factored";
    std::string model;
    std::string base_url;
    std::string endpoint_path;
    double temperature = -1.0;
    double timeout_s = 0.0;
    int retries = -1;
};

std::unique_ptr<Proposer> make_proposer(const SynthOptions& o, OptimizerConfig& config) {
    if (o.proposer == "hillclimb") return std::make_unique<HillClimbProposer>(config.seed);
    if (o.proposer == "replay") {
        if (o.script.empty()) throw ParameterError("--proposer replay needs --script FILE");
        config.proposer_params["script"] = o.script;
        return std::make_unique<ReplayProposer>(split_replay_script(read_text(o.script)));
    }
    if (o.proposer == "llm") {
        LlmParams params = LlmParams::from_environment();
        if (!o.model.empty()) params.model = o.model;
        if (!o.base_url.empty()) params.base_url = o.base_url;
        if (!o.endpoint_path.empty()) params.endpoint_path = o.endpoint_path;
        if (o.temperature >= 0) params.temperature = o.temperature;
        if (o.timeout_s > 0) params.timeout = std::chrono::milliseconds(static_cast<long long>(o.timeout_s * 1000));
        if (o.retries >= 0) params.max_retries = o.retries;
        config.proposer_params["model"] = params.model;
        config.proposer_params["base_url"] = params.base_url;
        config.proposer_params["endpoint_path"] = params.endpoint_path;
        config.proposer_params["temperature"] = fixed(params.temperature, 3);
        return std::make_unique<LlmProposer>(params, config.feedback_enabled);
    }
    throw ParameterError("unknown proposer '" + o.proposer + "' (llm, hillclimb, replay)");
}

int run_synth(const SynthOptions& o, std::ostream& out) {
    OptimizerConfig config;
    config.num_qubits = o.qubits;
    config.gate_budget = o.gates;
    config.queries = o.queries;
    config.steps_per_query = o.steps;
    config.feedback_enabled = o.feedback;
    config.strict_gate_count = !o.loose;
    config.proposer = o.proposer;
    config.evaluator = o.evaluator;
    config.seed = o.seed;
    if (!o.angles.empty()) config.angles = parse_angles(o.angles);
    if (!o.init.empty()) config.initial_circuit = load_circuit(o.init, o.qubits);
    const Evaluator evaluator = make_evaluator(evaluator_kind(o.evaluator));
    std::unique_ptr<Proposer> proposer = make_proposer(o, config);

    RunLogFile run;
    run.started_at = utc_timestamp();
    run.result = run_experiment(config, *proposer, evaluator);
    run.finished_at = utc_timestamp();

    std::filesystem::path path = o.out;
    if (std::filesystem::is_directory(path)) path /= run_file_name(config);
    run.label = o.label.empty() ? path.stem().string() : o.label;
    write_run(path, run);

    int rejected = 0;
    for (const auto& q : run.result.queries) {
        for (const auto& s : q.steps) rejected += s.rejected != RejectReason::None;
    }
    out << "run: " << path.string() << "\n";
    out << "initial q = " << fixed(run.result.initial_q, 4) << ", best q = " << fixed(run.result.best_q, 4) << "\n";
    out << "evaluations: " << run.result.evaluations << " of " << config.evaluation_budget()
        << ", rejected proposals: " << rejected << "\n";
    out << "best circuit: " << serialize(run.result.best_circuit) << "\n";
    out << render_table(build_table({run}));
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qsynth: closed-loop circuit synthesis scored by Meyer-Wallach entanglement"};
    app.name(args.empty() ? "qsynth" : args.front());
    app.require_subcommand(1);

    // eval
    std::string circuit_file;
    int qubits = 0;
    std::string eval_kind = "dense";
    auto* eval = app.add_subcommand("eval", "Print q and per-qubit purities of a circuit file");
    eval->add_option("--circuit", circuit_file, "Gate-list file")->required();
    eval->add_option("--qubits", qubits, "Register size (default: highest wire + 1)");
    eval->add_option("--evaluator", eval_kind, "dense, dense-f32 or factored");

    // random
    int rand_qubits = 0, rand_gates = 0;
    std::uint64_t rand_seed = 0;
    std::string rand_out, rand_angles;
    auto* random = app.add_subcommand("random", "Sample a random circuit");
    random->add_option("--qubits", rand_qubits)->required();
    random->add_option("--gates", rand_gates)->required();
    random->add_option("--seed", rand_seed)->required();
    random->add_option("--out", rand_out)->required();
    random->add_option("--angles", rand_angles, "Comma-separated RY angles in radians");

    // synth
    SynthOptions so;
    auto* synth = app.add_subcommand("synth", "Run the proposal loop and write a run file");
    synth->add_option("--qubits", so.qubits)->required();
    synth->add_option("--gates", so.gates)->required();
    synth->add_option("--queries", so.queries)->required();
    synth->add_option("--steps", so.steps)->required();
    synth->add_option("--proposer", so.proposer)->required()->check(CLI::IsMember({"llm", "hillclimb", "replay"}));
    synth->add_flag("--feedback", so.feedback, "Add the score-change sentence to prompts");
    synth->add_flag("--allow-gate-count-change", so.loose, "Evaluate proposals whose gate count differs");
    synth->add_option("--angles", so.angles);
    synth->add_option("--seed", so.seed);
    synth->add_option("--init", so.init, "Initial circuit file (default: random from --seed)");
    synth->add_option("--out", so.out, "Run file, or a directory for run-<hash>.json")->required();
    synth->add_option("--label", so.label);
    synth->add_option("--script", so.script, "Replay script, entries separated by '---' lines");
    synth->add_option("--evaluator", so.evaluator, "factored, dense or dense-f32");
    synth->add_option("--model", so.model, "Overrides LLM_MODEL");
    synth->add_option("--base-url", so.base_url, "Overrides LLM_BASE_URL");
    synth->add_option("--endpoint-path", so.endpoint_path, "Default /chat/completions");
    synth->add_option("--temperature", so.temperature);
    synth->add_option("--timeout", so.timeout_s, "Seconds per request");
    synth->add_option("--retries", so.retries);

    // baseline
    int base_qubits = 0, base_gates = 0, base_budget = 0, base_runs = 0;
    std::uint64_t base_seed = 0;
    std::string base_init, base_angles, base_eval = "factored";
    auto* baseline = app.add_subcommand("baseline", "Random-edit hill climbing under a fixed evaluation budget");
    baseline->add_option("--qubits", base_qubits)->required();
    baseline->add_option("--gates", base_gates)->required();
    baseline->add_option("--budget", base_budget)->required();
    baseline->add_option("--runs", base_runs)->required();
    baseline->add_option("--seed", base_seed)->required();
    baseline->add_option("--init", base_init, "Shared start circuit (default: random per run)");
    baseline->add_option("--angles", base_angles);
    baseline->add_option("--evaluator", base_eval);

    // analyze
    std::string analyze_file;
    int analyze_qubits = 0;
    auto* analyze = app.add_subcommand("analyze", "Decompose the output state into GHZ/Bell/product components");
    analyze->add_option("--circuit", analyze_file)->required();
    analyze->add_option("--qubits", analyze_qubits);

    // table
    std::vector<std::string> table_files;
    auto* table = app.add_subcommand("table", "Render run files as a query-trajectory table");
    table->add_option("runs", table_files, "Run files")->required();

    // replay-verify
    std::string verify_file;
    std::string verify_eval = "factored";
    auto* verify = app.add_subcommand("replay-verify", "Re-score every circuit in a run file");
    verify->add_option("run", verify_file)->required();
    verify->add_option("--evaluator", verify_eval);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*eval) {
            const Circuit circuit = load_circuit(circuit_file, qubits);
            out << "qubits: " << circuit.num_qubits << ", gates: " << circuit.size() << "\n";
            print_report(out, evaluate(circuit, evaluator_kind(eval_kind)));
        } else if (*random) {
            const AngleSet angles = rand_angles.empty() ? AngleSet::standard() : parse_angles(rand_angles);
            const Circuit circuit = random_circuit(rand_qubits, rand_gates, angles, rand_seed);
            write_text(rand_out, serialize(circuit) + "\n");
            out << serialize(circuit) << "\n";
        } else if (*synth) {
            return run_synth(so, out);
        } else if (*baseline) {
            OptimizerConfig config;
            config.num_qubits = base_qubits;
            config.gate_budget = base_gates;
            config.queries = 1;
            config.steps_per_query = base_budget;
            if (!base_angles.empty()) config.angles = parse_angles(base_angles);
            if (!base_init.empty()) config.initial_circuit = load_circuit(base_init, base_qubits);
            if (base_runs < 1) throw ParameterError("--runs must be >= 1");
            std::vector<std::uint64_t> seeds;
            for (int r = 0; r < base_runs; ++r) seeds.push_back(base_seed + static_cast<std::uint64_t>(r));
            const auto rows = compare_budget_matched(config, seeds, make_evaluator(evaluator_kind(base_eval)));
            double best = 0.0;
            out << "seed | initial q | best q | evaluations\n";
            for (const auto& row : rows) {
                out << row.seed << " | " << fixed(row.initial_q, 4) << " | " << fixed(row.hillclimb_best_q, 4) << " | "
                    << row.hillclimb_evaluations << "\n";
                best = std::max(best, row.hillclimb_best_q);
            }
            out << "max best q over " << rows.size() << " runs: " << fixed(best, 4) << "\n";
        } else if (*analyze) {
            const Circuit circuit = load_circuit(analyze_file, analyze_qubits);
            const AnalysisReport report = classify_components(circuit);
            out << "q = " << fixed(report.mw.q, 4) << "\n";
            out << "clifford: " << (report.clifford ? "yes" : "no") << "\n";
            out << "components: " << report.summary() << "\n";
            for (const auto& c : report.components) {
                out << "  {";
                for (std::size_t k = 0; k < c.qubits.size(); ++k) out << (k ? "," : "") << c.qubits[k];
                out << "}  " << c.label() << "  fidelity " << fixed(c.fidelity, 6) << "  q " << fixed(c.q, 4);
                if (c.theta) out << "  theta " << fixed(*c.theta, 6);
                if (!c.note.empty()) out << "  (" << c.note << ")";
                out << "\n";
            }
        } else if (*table) {
            std::vector<RunLogFile> runs;
            for (const auto& f : table_files) runs.push_back(read_run(f));
            out << render_table(build_table(runs));
        } else if (*verify) {
            const RunLogFile run = read_run(verify_file);
            const VerifyReport report = replay_verify(run, make_evaluator(evaluator_kind(verify_eval)));
            for (const auto& m : report.mismatches) {
                out << "MISMATCH " << m.where << ": recorded " << std::setprecision(17) << m.recorded << ", recomputed "
                    << m.recomputed << "\n";
            }
            for (const auto& i : report.inconsistencies) out << "INCONSISTENT " << i << "\n";
            out << (report.ok() ? "OK" : "FAILED") << ": " << report.checked << " scores checked\n";
            return report.ok() ? 0 : 3;
        }
    } catch (const Error& e) {
        err << "qsynth: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "qsynth: unexpected failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace qsynth::cli
