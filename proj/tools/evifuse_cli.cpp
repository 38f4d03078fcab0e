// Command-line front end: training, inference, evidence fusion, and the
// three stream studies (prediction-window ablation, retraining parameter
// sweep, fusion ablation), all driving the evifuse core library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evifuse/errors.hpp"
#include "evifuse/experiments.hpp"
#include "evifuse/knowledge_base.hpp"
#include "evifuse/model_io.hpp"
#include "evifuse/system_fusion.hpp"
#include "json.hpp"

namespace {

using namespace evifuse;

// --- shared option plumbing --------------------------------------------------

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path,
                    "experiment config JSON (defaults used when omitted)");
    cmd->add_option("-s,--seed", opts.seed, "override the config's seed");
    cmd->add_option("-o,--out", opts.out_dir, "override the config's output directory");
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
    ExperimentConfig cfg = opts.config_path.empty() ? default_experiment_config()
                                                    : load_experiment_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    return cfg;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(flag + ": '" + item + "' is not an integer");
        }
    }
    if (values.empty()) throw ConfigError(flag + ": empty list");
    return values;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& flag) {
    std::vector<std::size_t> sizes;
    for (int v : parse_int_list(text, flag)) {
        if (v < 0) throw ConfigError(flag + ": sizes must be non-negative");
        sizes.push_back(static_cast<std::size_t>(v));
    }
    return sizes;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_train(const CommonOptions& common, const std::string& model_out) {
    const ExperimentConfig cfg = resolve_config(common);
    const StudySystem system = build_study_system(cfg);
    if (!system.ensemble)
        throw ConfigError("nothing to train: the config declares no ensemble members");
    save_ensemble(*system.ensemble, model_out);

    std::cout << "trained " << system.ensemble->members.size() << " members on "
              << system.train.rows() << " rows (" << system.val.rows() << " validation, "
              << system.test.rows() << " test held out)\n";
    for (const ClassifierModel& member : system.ensemble->members) {
        const MetricsReport report =
            compute_metrics(system.val.labels, member.predict_all(system.val),
                            *system.ensemble->frame);
        std::cout << "  " << member.spec().describe() << ": validation macro-F1 "
                  << format_fixed(report.macro_f1) << "\n";
    }
    if (system.rules)
        std::cout << "rule model active with " << system.rules->rules.size() << " rules\n";
    std::cout << "model written to " << model_out << "\n";
    return 0;
}

int cmd_infer(const std::string& model_path, const std::string& data_csv,
              const std::string& label_column, const std::string& rules_path,
              const std::string& kb_path, const std::string& out_csv) {
    const EnsembleClassifier ec = load_ensemble(model_path);
    const Dataset data = load_csv(data_csv, label_column);

    std::optional<RuleModel> rules;
    if (!rules_path.empty()) {
        RuleModel loaded = load_rule_model(rules_path);
        if (!same_frame(loaded.frame, ec.frame))
            throw ConfigError("the rule file's frame differs from the model's frame");
        rules = std::move(loaded);
    }
    KnowledgeBase kb;
    if (!kb_path.empty()) kb = kb_load(kb_path, ec.frame);

    std::string csv = rules ? "row,truth,y_ec,u_d_ec,u_y_ec,y_sys,u_d_sys,u_y_sys\n"
                            : "row,truth,y_ec,u_d_ec,u_y_ec\n";
    std::vector<int> decisions;
    decisions.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const EnsembleVerdict ev = ec_infer(ec, data.features[i]);
        csv += std::to_string(i) + "," + std::to_string(data.labels[i]) + "," +
               std::to_string(ev.y_ec) + "," + format_fixed(ev.u_d) + "," +
               format_fixed(ev.u_y);
        int decision = ev.y_ec;
        if (rules) {
            const RuleVerdict rv = klafate_infer_row(*rules, data.feature_names,
                                                     data.features[i]);
            const SystemVerdict sv = system_fuse(ev, rv.mass);
            csv += "," + std::to_string(sv.y_sys) + "," + format_fixed(sv.u_d_sys) + "," +
                   format_fixed(sv.u_y_sys);
            decision = sv.y_sys;
        }
        csv += "\n";
        decisions.push_back(decision);
    }

    if (out_csv.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_csv);
        if (!out) throw FileNotFoundError("cannot open '" + out_csv + "' for writing");
        out << csv;
        std::cout << "verdicts written to " << out_csv << "\n";
    }

    const MetricsReport report = compute_metrics(data.labels, decisions, *ec.frame);
    std::cerr << "macro-F1 " << format_fixed(report.macro_f1) << " over " << data.rows()
              << " rows\n";

    if (!kb.empty()) {
        std::vector<int> seen;
        std::cout << "assessments:\n";
        for (int decision : decisions) {
            if (std::find(seen.begin(), seen.end(), decision) != seen.end()) continue;
            seen.push_back(decision);
            const auto tuple = match_assessment(kb, decision);
            if (!tuple) {
                std::cout << "  label " << decision << ": no knowledge-base entry\n";
                continue;
            }
            std::cout << "  label " << decision << ": " << tuple->failure_mode << " ("
                      << tuple->process << "/" << tuple->subprocess << ")\n";
            for (const std::string& r : tuple->recommendations)
                std::cout << "    - " << r << "\n";
        }
    }
    return 0;
}

int cmd_fuse(const std::string& in_path, const std::string& rule_name,
             const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw FileNotFoundError("cannot open '" + in_path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(in_path + ": not valid JSON: " + e.what());
    }

    FramePtr frame;
    std::vector<MassFunction> masses;
    try {
        frame = make_frame(doc.at("frame").get<std::vector<int>>());
        for (const auto& jm : doc.at("masses"))
            masses.emplace_back(frame, jm.at("singletons").get<std::vector<double>>(),
                                jm.at("theta").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(in_path + ": " + e.what());
    }
    if (masses.empty()) throw ParseError(in_path + ": 'masses' is empty");

    const CombinationRule rule = [&] {
        if (rule_name == "dempster") return CombinationRule::dempster;
        if (rule_name == "yager") return CombinationRule::yager;
        throw ConfigError("--rule must be 'dempster' or 'yager'");
    }();
    const FusionResult result = combine_many(masses, rule);

    nlohmann::json out = {{"rule", rule_name},
                          {"frame", frame->labels()},
                          {"fused", {{"singletons", result.fused.singletons()},
                                     {"theta", result.fused.theta()}}},
                          {"conflict", result.conflict},
                          {"decision", result.fused.argmax_label()},
                          {"u", result.fused.theta()}};
    const std::string text = out.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out_path);
        if (!file) throw FileNotFoundError("cannot open '" + out_path + "' for writing");
        file << text;
    }
    return 0;
}

int cmd_window_ablation(const CommonOptions& common, const std::string& windows) {
    const ExperimentConfig cfg = resolve_config(common);
    const auto sizes = parse_size_list(windows, "--windows");
    const WindowAblationResult result = run_window_ablation(cfg, sizes);
    std::cout << "window_size  macro_f1\n";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        std::cout << sizes[i] << "  " << format_fixed(result.reports[i].macro_f1) << "\n";
    std::cout << "table: " << result.table_csv_path << "\n"
              << "trace: " << result.trace_csv_path << "\n"
              << "summary: " << result.summary_path << "\n";
    return 0;
}

int cmd_retrain_sweep(const CommonOptions& common, const std::string& thresholds,
                      const std::string& windows, const std::string& patiences,
                      bool semi_auto, std::optional<double> tr_d_max,
                      std::optional<double> tr_y_max) {
    ExperimentConfig cfg = resolve_config(common);
    if (semi_auto) cfg.semi_auto = true;
    if (tr_d_max) cfg.update.tr_d_max = *tr_d_max;
    if (tr_y_max) cfg.update.tr_y_max = *tr_y_max;

    const auto confirm = [] {
        std::cerr << "anomalous data reached the retraining threshold; retrain now? [y/N] "
                  << std::flush;
        std::string answer;
        std::getline(std::cin, answer);
        return !answer.empty() && (answer[0] == 'y' || answer[0] == 'Y');
    };
    const RetrainSweepResult result = run_retrain_sweep(
        cfg, parse_int_list(thresholds, "--threshold-sizes"),
        parse_size_list(windows, "--windows"), parse_int_list(patiences, "--patiences"),
        cfg.semi_auto ? std::function<bool()>(confirm) : std::function<bool()>());

    std::cout << "th  ws  pt  retrained  batch2_macro_f1\n";
    for (const RetrainSweepCell& cell : result.cells)
        std::cout << cell.threshold_size << "  " << cell.window_size << "  " << cell.patience
                  << "  " << (cell.retrained ? "yes" : "no") << "  "
                  << format_fixed(cell.batch2.macro_f1) << "\n";
    std::cout << "table: " << result.table_csv_path << "\n"
              << "notifications: " << result.notifications_path << "\n"
              << "summary: " << result.summary_path << "\n";
    return 0;
}

int cmd_fusion_ablation(const CommonOptions& common) {
    const ExperimentConfig cfg = resolve_config(common);
    const FusionAblationResult result = run_fusion_ablation(cfg);
    std::cout << "source  macro_f1  mean_u_d  mean_u_y\n";
    for (const FusionAblationRow& row : result.rows)
        std::cout << row.source << "  " << format_fixed(row.report.macro_f1) << "  "
                  << format_fixed(row.mean_u_d) << "  " << format_fixed(row.mean_u_y) << "\n";
    std::cout << "table: " << result.table_csv_path << "\n"
              << "summary: " << result.summary_path << "\n";
    return 0;
}

int cmd_report(const std::string& model_path, const std::string& data_csv,
               const std::string& label_column) {
    const EnsembleClassifier ec = load_ensemble(model_path);
    std::cout << "frame:";
    for (int label : ec.frame->labels()) std::cout << " " << label;
    std::cout << "\nmembers:\n";
    for (std::size_t m = 0; m < ec.members.size(); ++m) {
        std::cout << "  " << ec.members[m].spec().describe() << " (weights";
        for (double w : ec.weights[m].values()) std::cout << " " << format_fixed(w);
        std::cout << ")\n";
    }
    if (!data_csv.empty()) {
        const Dataset data = load_csv(data_csv, label_column);
        std::vector<int> predicted;
        std::vector<double> u_d, u_y;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            const EnsembleVerdict ev = ec_infer(ec, data.features[i]);
            predicted.push_back(ev.y_ec);
            u_d.push_back(ev.u_d);
            u_y.push_back(ev.u_y);
        }
        std::cout << metrics_to_text(
            compute_metrics(data.labels, predicted, *ec.frame, u_d, u_y));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision-level evidence fusion: ensemble + expert rules with "
                 "uncertainty monitoring and automatic model updates"};
    app.require_subcommand(1);

    CommonOptions train_common;
    std::string train_model_out = "model.json";
    CLI::App* train = app.add_subcommand("train", "train an ensemble and save it");
    add_common(train, train_common);
    train->add_option("-m,--model", train_model_out, "output model file");

    std::string infer_model, infer_data, infer_label = "label", infer_rules, infer_kb,
                infer_out;
    CLI::App* infer = app.add_subcommand("infer", "score a CSV with a saved model");
    infer->add_option("-m,--model", infer_model, "model file")->required();
    infer->add_option("-d,--data", infer_data, "labeled CSV to score")->required();
    infer->add_option("--label-column", infer_label, "label column name");
    infer->add_option("-r,--rules", infer_rules, "rule model JSON to fuse in");
    infer->add_option("-k,--kb", infer_kb, "knowledge base JSON for assessments");
    infer->add_option("-o,--out", infer_out, "verdict CSV (stdout when omitted)");

    std::string fuse_in, fuse_rule = "dempster", fuse_out;
    CLI::App* fuse = app.add_subcommand("fuse", "combine mass functions from a JSON file");
    fuse->add_option("-i,--in", fuse_in, "JSON with {frame, masses}")->required();
    fuse->add_option("--rule", fuse_rule, "dempster or yager");
    fuse->add_option("-o,--out", fuse_out, "output JSON (stdout when omitted)");

    CommonOptions wa_common;
    std::string wa_windows = "0,5,10,20,50";
    CLI::App* wa = app.add_subcommand("window-ablation",
                                      "score one stream under several prediction windows");
    add_common(wa, wa_common);
    wa->add_option("-w,--windows", wa_windows, "comma-separated window sizes");

    CommonOptions rs_common;
    std::string rs_thresholds = "50,100,200", rs_windows = "0,20", rs_patiences = "5,15";
    bool rs_semi_auto = false;
    std::optional<double> rs_tr_d, rs_tr_y;
    CLI::App* rs = app.add_subcommand("retrain-sweep",
                                      "stream, collect anomalies, retrain, score batch two");
    add_common(rs, rs_common);
    rs->add_option("-t,--threshold-sizes", rs_thresholds, "retraining set sizes");
    rs->add_option("-w,--windows", rs_windows, "prediction window sizes");
    rs->add_option("-p,--patiences", rs_patiences, "flag-run patience values");
    rs->add_flag("--semi-auto", rs_semi_auto, "ask on stdin before retraining");
    rs->add_option("--tr-d-max", rs_tr_d, "override the normalized-uncertainty threshold");
    rs->add_option("--tr-y-max", rs_tr_y, "override the conflict-uncertainty threshold");

    CommonOptions fa_common;
    CLI::App* fa = app.add_subcommand("fusion-ablation",
                                      "compare every evidence source against the fusion");
    add_common(fa, fa_common);

    std::string report_model, report_data, report_label = "label";
    CLI::App* report = app.add_subcommand("report", "describe a saved model");
    report->add_option("-m,--model", report_model, "model file")->required();
    report->add_option("-d,--data", report_data, "optional CSV to evaluate against");
    report->add_option("--label-column", report_label, "label column name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return cmd_train(train_common, train_model_out);
        if (infer->parsed())
            return cmd_infer(infer_model, infer_data, infer_label, infer_rules, infer_kb,
                             infer_out);
        if (fuse->parsed()) return cmd_fuse(fuse_in, fuse_rule, fuse_out);
        if (wa->parsed()) return cmd_window_ablation(wa_common, wa_windows);
        if (rs->parsed())
            return cmd_retrain_sweep(rs_common, rs_thresholds, rs_windows, rs_patiences,
                                     rs_semi_auto, rs_tr_d, rs_tr_y);
        if (fa->parsed()) return cmd_fusion_ablation(fa_common);
        if (report->parsed()) return cmd_report(report_model, report_data, report_label);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FileNotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
