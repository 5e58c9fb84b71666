#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "attrition/evaluation.hpp"
#include "attrition/learning.hpp"
#include "attrition/mcts.hpp"
#include "attrition/synthetic.hpp"

using namespace attrition;

namespace {

struct Globals {
    std::string catalog;
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "json";
    std::vector<std::string> argv;
};

Globals g;

Json invocation() { return g.argv; }

Catalog catalog_or_synthetic() { return g.catalog.empty() ? synthetic_catalog() : load_catalog(g.catalog); }

void emit(const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    write_text_file(g.out, text);
}

void emit_json(Json j) {
    j["format_version"] = kFormatVersion;
    j["invocation"] = invocation();
    emit(j.dump(2) + "\n");
}

std::string csv_preamble() {
    std::string line = "# format_version=" + std::to_string(kFormatVersion) + " invocation=";
    for (std::size_t i = 0; i < g.argv.size(); ++i) line += (i ? " " : "") + g.argv[i];
    return line + "\n";
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

// DPF table and Borda policy from a model file, or the catalog's static values.
struct Params {
    DpfTable dpf;
    std::optional<TargetSelectionPolicy> borda;
    std::string dpf_label = "static";
};

Params load_params(const std::string& model_file, const Catalog& catalog) {
    Params p;
    if (model_file.empty()) {
        p.dpf = static_dpf(catalog);
        return p;
    }
    auto m = load_model(model_file, catalog);
    p.dpf = m.dpf;
    p.borda = m.borda;
    p.dpf_label = m.dpf.provenance == DpfProvenance::Learned ? "learned" : "file";
    return p;
}

TargetSelectionPolicy make_policy(const std::string& name, const Params& params, std::uint64_t seed) {
    switch (policy_kind_from_string(name)) {
        case PolicyKind::Random: return TargetSelectionPolicy::random(seed);
        case PolicyKind::DestroyScore: return TargetSelectionPolicy::destroy_score();
        case PolicyKind::BordaCount:
            if (!params.borda) throw ValidationError("policy 'borda' needs --model-file with Borda scores");
            return *params.borda;
    }
    throw ValidationError("unknown policy");
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string state, model = "decreasing", policy = "destroy-score", model_file;
};

void run_simulate(const SimulateArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    const CombatState state = combat_state_from_json(read_json_file(a.state));
    validate_combat_state(state, catalog);
    const Params params = load_params(a.model_file, catalog);
    const CombatModel model(model_kind_from_string(a.model), params.dpf, make_policy(a.policy, params, g.seed));
    const CombatOutcome out = simulate(model, state, catalog);
    if (g.format == "csv") {
        std::ostringstream os;
        os << csv_preamble() << "model,winner,duration_frames,survivors_a,survivors_b\n"
           << to_string(out.model) << ',' << to_string(out.winner) << ',' << out.duration_frames << ','
           << out.survivors_a.size() << ',' << out.survivors_b.size() << "\n";
        emit(os.str());
        return;
    }
    emit_json(to_json(out));
}

struct DetectArgs {
    std::vector<std::string> traces;
    long peace_window = kDefaultPeaceWindow;
    bool train_filter = false;
};

void run_detect(const DetectArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    CombatDataset ds;
    ds.catalog_ref = catalog.id();
    ds.source = "detect";
    for (const auto& path : a.traces) {
        const Trace trace = load_trace(path);
        auto records = detect_combats(trace, catalog, {a.peace_window});
        ds.records.insert(ds.records.end(), records.begin(), records.end());
    }
    if (a.train_filter) ds = filter_for_training(ds, default_training_filter(catalog));
    emit_json(to_json(ds));
}

struct LearnArgs {
    std::string dataset;
    bool train_filter = false;
};

void run_learn(const LearnArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    CombatDataset ds = load_dataset(a.dataset);
    validate_dataset(ds, catalog);
    if (a.train_filter) ds = filter_for_training(ds, default_training_filter(catalog));
    emit_json(to_json(learn_model(ds, catalog)));
}

struct EvaluateArgs {
    std::string dataset, model_file, models = "lanchester,sustained,decreasing", policies = "destroy-score",
                                      dpf = "static";
    std::size_t folds = 0;
    bool records = false;
};

void run_evaluate(const EvaluateArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    const CombatDataset ds = load_dataset(a.dataset);
    validate_dataset(ds, catalog);
    const Params file_params = load_params(a.model_file, catalog);
    const Params static_params = load_params("", catalog);

    std::string csv = csv_preamble() + eval_csv_header() + "\n";
    Json rows = Json::array();
    for (const auto& model_name : split_list(a.models)) {
        const ModelKind kind = model_kind_from_string(model_name);
        for (const auto& dpf_name : split_list(a.dpf)) {
            if (dpf_name != "static" && dpf_name != "learned" && dpf_name != "file")
                throw ValidationError("--dpf takes static, learned or file");
            for (const auto& policy_name : split_list(a.policies)) {
                const PolicyKind pk = policy_kind_from_string(policy_name);
                const bool needs_learning = dpf_name == "learned" || (pk == PolicyKind::BordaCount && a.model_file.empty());
                if (needs_learning) {
                    if (a.folds < 2) throw ValidationError("learned parameters need --folds >= 2 (or --model-file)");
                    CrossValidationConfig cfg;
                    cfg.kind = kind;
                    cfg.dpf_source = dpf_name == "learned" ? DpfSource::Learned : DpfSource::Static;
                    cfg.policy = pk;
                    cfg.folds = a.folds;
                    cfg.seed = g.seed;
                    const auto r = cross_validate(ds, catalog, cfg);
                    csv += to_csv_row(r) + "\n";
                    rows.push_back(to_json(r));
                    continue;
                }
                const Params& p = dpf_name == "file" ? file_params : static_params;
                if (dpf_name == "file" && a.model_file.empty()) throw ValidationError("--dpf file needs --model-file");
                const CombatModel model(kind, p.dpf, make_policy(policy_name, file_params, g.seed));
                EvalReport r = evaluate(model, ds, catalog);
                r.label.dpf_source = dpf_name;
                csv += to_csv_row(r) + "\n";
                rows.push_back(to_json(r, a.records));
            }
        }
    }
    if (g.format == "csv") emit(csv);
    else emit_json({{"reports", rows}});
}

struct BenchArgs {
    std::string dataset, model_file, models = "lanchester,sustained,decreasing,oracle", policy = "destroy-score";
    std::size_t reps = 3;
};

void run_bench(const BenchArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    const CombatDataset ds = load_dataset(a.dataset);
    validate_dataset(ds, catalog);
    const Params p = load_params(a.model_file, catalog);
    std::vector<NamedModel> models;
    for (const auto& name : split_list(a.models))
        models.push_back({name, CombatModel(model_kind_from_string(name), p.dpf, make_policy(a.policy, p, g.seed))});
    const auto rows = benchmark_models(models, ds, catalog, a.reps);
    if (g.format == "csv") {
        std::string csv = csv_preamble() + bench_csv_header() + "\n";
        for (const auto& r : rows) csv += to_csv_row(r) + "\n";
        emit(csv);
        return;
    }
    Json j = Json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    emit_json({{"rows", j}});
}

struct PlayArgs {
    std::string map, scenario, agent_a = "mcts", agent_b = "random", model = "decreasing", world = "decreasing",
                                policy = "destroy-score", log, abstraction;
    int games = 1;
    MctsConfig mcts;
    long max_frames = 28800;
};

void run_play(const PlayArgs& a) {
    if (g.catalog.empty()) throw ValidationError("play needs --catalog (the map's unit catalog)");
    const Catalog catalog = load_catalog(g.catalog);
    const Scenario scenario = load_scenario(a.scenario, catalog);
    const std::string map_path = a.map.empty() ? scenario.map : a.map;
    if (map_path.empty()) throw ValidationError("no map given (--map or the scenario's \"map\")");
    const Abstraction abstraction = a.abstraction.empty() ? scenario.abstraction : abstraction_from_string(a.abstraction);
    auto graph = std::make_shared<const RegionGraph>(load_map(map_path), abstraction);
    std::vector<std::string> warnings;
    const HighLevelState initial = abstract_from_units(scenario.units, graph, abstraction, catalog, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    validate_config(a.mcts);
    if (a.games < 1) throw ValidationError("--games must be at least 1");

    const Params p = load_params("", catalog);
    const auto policy = make_policy(a.policy, p, g.seed);
    const CombatModel forward(model_kind_from_string(a.model), p.dpf, policy);
    const CombatModel world(model_kind_from_string(a.world), p.dpf, policy);
    AgentSpec spec_a{agent_kind_from_string(a.agent_a), a.mcts, forward};
    AgentSpec spec_b{agent_kind_from_string(a.agent_b), a.mcts, forward};

    std::ofstream log_file;
    if (!a.log.empty()) {
        log_file.open(a.log);
        if (!log_file) throw std::runtime_error("cannot write " + a.log);
    }
    std::vector<MatchResult> results;
    Json games = Json::array();
    for (int i = 0; i < a.games; ++i) {
        MatchConfig mc;
        mc.max_frames = a.max_frames;
        mc.plan_interval = a.mcts.plan_interval;
        mc.seed = splitmix64(g.seed) + static_cast<std::uint64_t>(i);
        mc.game_index = i;
        results.push_back(play_match(initial, spec_a, spec_b, world, catalog, mc, a.log.empty() ? nullptr : &log_file));
        games.push_back(to_json(results.back()));
    }
    const auto summary = summarize(results, a.agent_a, a.agent_b, a.model);
    if (g.format == "csv") {
        emit(csv_preamble() + match_csv_header() + "\n" + to_csv_row(summary) + "\n");
        return;
    }
    Json j = to_json(summary);
    j["games_detail"] = games;
    emit_json(j);
}

struct StatsArgs {
    std::string dataset;
};

void run_stats(const StatsArgs& a) {
    const CombatDataset ds = load_dataset(a.dataset);
    const auto s = dataset_stats(ds);
    if (g.format == "csv") {
        std::ostringstream os;
        os << csv_preamble()
           << "n_records,army_destroyed,peace,reinforcement,game_end,length_mean,length_min,length_max,units_mean,"
              "units_min,units_max,types_mean,types_min,types_max\n"
           << s.n_records << ',' << s.by_reason[0] << ',' << s.by_reason[1] << ',' << s.by_reason[2] << ','
           << s.by_reason[3] << ',' << s.length.mean << ',' << s.length.min << ',' << s.length.max << ','
           << s.units.mean << ',' << s.units.min << ',' << s.units.max << ',' << s.types.mean << ',' << s.types.min
           << ',' << s.types.max << "\n";
        emit(os.str());
        return;
    }
    emit_json(to_json(s));
}

struct GenArgs {
    std::string kind = "dataset";
    std::size_t n = 1000;
    int max_units = 20;
    int max_types = 1;
    std::string targeting = "focused", policy = "destroy-score", truth_out, catalog_out;
    double spread = 0.0;
};

void run_gen(const GenArgs& a) {
    const Catalog catalog = catalog_or_synthetic();
    if (!a.catalog_out.empty()) save_catalog(catalog, a.catalog_out);
    Rng rng(splitmix64(g.seed ^ 0x7472757468ULL));
    const Eigen::MatrixXd truth = a.spread > 0.0 ? perturbed_dpf(catalog, rng, a.spread) : static_dpf(catalog).per_pair;

    OracleDatasetOptions opt;
    opt.n_records = a.n;
    opt.seed = g.seed;
    opt.combat.max_units = a.max_units;
    opt.combat.max_types_per_side = a.max_types;
    if (a.targeting != "focused" && a.targeting != "uniform") throw ValidationError("--targeting is focused or uniform");
    opt.oracle.targeting = a.targeting == "uniform" ? OracleTargeting::UniformSpread : OracleTargeting::Focused;

    Params params;
    params.dpf.per_pair = truth;
    TargetSelectionPolicy policy = a.policy == "borda" ? TargetSelectionPolicy::destroy_score()
                                                       : make_policy(a.policy, params, g.seed);
    std::vector<TypeId> planted;
    if (a.policy == "borda" || a.kind == "borda") {
        for (TypeId t : combat_type_pool(catalog))
            if (!catalog[t].is_flyer) planted.push_back(t);
        shuffle(planted, rng);
        planted.resize(std::min<std::size_t>(planted.size(), 3));
        policy = policy_from_order(planted, catalog.size());
    }

    CombatDataset ds;
    if (a.kind == "dataset" || a.kind == "trace") ds = oracle_dataset(catalog, truth, policy, opt);
    else if (a.kind == "borda") ds = planted_borda_dataset(catalog, truth, planted, a.n, g.seed);
    else throw ValidationError("--kind is dataset, borda or trace");

    if (!a.truth_out.empty()) {
        LearnedModel m;
        m.catalog_ref = catalog.id();
        m.dpf.per_pair = truth;
        m.dpf.provenance = DpfProvenance::Static;
        refresh_domain_vectors(m.dpf, catalog);
        m.borda = policy.kind == PolicyKind::BordaCount ? policy : policy_from_order({}, catalog.size());
        m.source = "generating parameters";
        save_model(m, a.truth_out);
    }
    if (a.kind == "trace") {
        std::ostringstream os;
        write_trace(trace_from_records(ds.records, catalog, catalog.id()), os);
        emit(os.str());
        return;
    }
    emit_json(to_json(ds));
}

int fail(int code, const char* kind, const std::string& message) {
    if (g.format == "json")
        std::cerr << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
    else
        std::cerr << "error: " << message << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    g.argv.assign(argv + 1, argv + argc);
    if (const char* env = std::getenv("ATTRITION_CATALOG")) g.catalog = env;
    if (const char* env = std::getenv("ATTRITION_OUT")) g.out = env;

    CLI::App app{"Attrition-game combat models: simulate, learn, evaluate, search."};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.add_option("--catalog", g.catalog, "Unit catalog JSON (env ATTRITION_CATALOG; default: built-in synthetic)");
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--out", g.out, "Output file, - for stdout (env ATTRITION_OUT)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Run one combat through a model");
    c_sim->add_option("--state", sim.state, "Combat state JSON")->required()->check(CLI::ExistingFile);
    c_sim->add_option("--model", sim.model, "lanchester, sustained, decreasing, oracle, ltd, ltd2");
    c_sim->add_option("--policy", sim.policy, "random, destroy-score, borda");
    c_sim->add_option("--model-file", sim.model_file, "Learned model file (DPF + Borda)")->check(CLI::ExistingFile);

    DetectArgs det;
    auto* c_det = app.add_subcommand("detect", "Extract combat records from unit-event traces");
    c_det->add_option("--trace", det.traces, "Trace file(s), NDJSON")->required()->check(CLI::ExistingFile);
    c_det->add_option("--peace-window", det.peace_window, "Frames without attacks that end a fight");
    c_det->add_flag("--train-filter", det.train_filter, "Keep only records usable for training");

    LearnArgs learn;
    auto* c_learn = app.add_subcommand("learn", "Learn effective DPF and Borda policy from a dataset");
    c_learn->add_option("--dataset", learn.dataset, "Combat dataset JSON")->required()->check(CLI::ExistingFile);
    c_learn->add_flag("--train-filter", learn.train_filter, "Apply the training filter first");

    EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "Winner accuracy and final-state similarity");
    c_ev->add_option("--dataset", ev.dataset, "Combat dataset JSON")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--model-file", ev.model_file, "Model file for --dpf file / --policies borda")
        ->check(CLI::ExistingFile);
    c_ev->add_option("--models", ev.models, "Comma list of models");
    c_ev->add_option("--policies", ev.policies, "Comma list of target policies");
    c_ev->add_option("--dpf", ev.dpf, "Comma list of static, learned, file");
    c_ev->add_option("--folds", ev.folds, "Cross-validation folds for learned parameters");
    c_ev->add_flag("--records", ev.records, "Include per-record rows in JSON output");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Median wall time to simulate a whole dataset");
    c_bench->add_option("--dataset", bench.dataset, "Combat dataset JSON")->required()->check(CLI::ExistingFile);
    c_bench->add_option("--model-file", bench.model_file, "Model file with the DPF to use")->check(CLI::ExistingFile);
    c_bench->add_option("--models", bench.models, "Comma list of models");
    c_bench->add_option("--policy", bench.policy, "Target policy");
    c_bench->add_option("--reps", bench.reps, "Repetitions (at least 3)");

    PlayArgs play;
    auto* c_play = app.add_subcommand("play", "Play abstract-game matches");
    c_play->add_option("--scenario", play.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    c_play->add_option("--map", play.map, "Map JSON (default: the scenario's)");
    c_play->add_option("--abstraction", play.abstraction, "R-MB, R-MA, RC-MB, RC-MA (default: the scenario's)");
    c_play->add_option("--a", play.agent_a, "Agent for player A: mcts, scripted, random");
    c_play->add_option("--b", play.agent_b, "Agent for player B");
    c_play->add_option("--games", play.games, "Number of games");
    c_play->add_option("--model", play.model, "Forward model used by search");
    c_play->add_option("--world", play.world, "Model resolving the actual game's fights");
    c_play->add_option("--policy", play.policy, "Target policy for both models");
    c_play->add_option("--budget", play.mcts.playout_budget, "Playouts per search");
    c_play->add_option("--epsilon", play.mcts.epsilon, "Exploration rate");
    c_play->add_option("--depth", play.mcts.max_tree_depth, "Maximum tree depth");
    c_play->add_option("--playout", play.mcts.playout_length, "Playout length in frames");
    c_play->add_option("--plan-interval", play.mcts.plan_interval, "Frames between planning cycles");
    c_play->add_option("--max-frames", play.max_frames, "Game length limit in frames");
    c_play->add_option("--log", play.log, "JSON-lines log, one line per planning cycle");

    StatsArgs stats;
    auto* c_stats = app.add_subcommand("stats", "Summary statistics of a dataset");
    c_stats->add_option("--dataset", stats.dataset, "Combat dataset JSON")->required()->check(CLI::ExistingFile);

    GenArgs gen;
    auto* c_gen = app.add_subcommand("gen-synthetic", "Generate combats with the frame-level oracle");
    c_gen->add_option("--kind", gen.kind, "dataset, borda or trace");
    c_gen->add_option("-n,--records", gen.n, "Number of fights");
    c_gen->add_option("--max-units", gen.max_units, "Units per side at most");
    c_gen->add_option("--max-types", gen.max_types, "Unit types per side at most");
    c_gen->add_option("--targeting", gen.targeting, "focused or uniform");
    c_gen->add_option("--policy", gen.policy, "Target policy of the oracle: random, destroy-score, borda");
    c_gen->add_option("--spread", gen.spread, "Perturb the static DPF by up to this fraction");
    c_gen->add_option("--truth-out", gen.truth_out, "Write the generating parameters as a model file");
    c_gen->add_option("--catalog-out", gen.catalog_out, "Write the catalog used");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    try {
        if (*c_sim) run_simulate(sim);
        else if (*c_det) run_detect(det);
        else if (*c_learn) run_learn(learn);
        else if (*c_ev) run_evaluate(ev);
        else if (*c_bench) run_bench(bench);
        else if (*c_play) run_play(play);
        else if (*c_stats) run_stats(stats);
        else if (*c_gen) run_gen(gen);
    } catch (const ValidationError& e) {
        return fail(2, "validation", e.what());
    } catch (const std::exception& e) {
        return fail(3, "runtime", e.what());
    }
    return 0;
}
