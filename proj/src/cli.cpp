#include "em0/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "em0/energy.hpp"
#include "em0/errors.hpp"
#include "em0/image.hpp"
#include "em0/simulator.hpp"
#include "em0/static_analysis.hpp"
#include "em0/trainer.hpp"

namespace em0::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_nj(double nj) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", nj);
    return buf;
}

json counters_json(const EventCounters& c) {
    json j;
    j["c1"] = c.c1;
    j["c2"] = c.c2;
    j["c3"] = c.c3;
    j["c4"] = c.c4;
    j["c5"] = c.c5;
    j["c6"] = c.c6;
    j["cycles"] = c.cycles;
    json h;
    for (size_t k = 0; k < c.histogram.size(); ++k)
        h[opcode_class_name(static_cast<OpcodeClass>(k))] = c.histogram[k];
    j["opcode_histogram"] = h;
    return j;
}

EnergyModel resolve_model(const std::string& selector) {
    // A selector is either a builtin config key ("20,OFF,0") or a path to
    // a model JSON file; EM0_MODEL_DIR is an extra search directory.
    try {
        auto cfg = HardwareConfig::parse(selector);
        return ModelRegistry::builtin().lookup(cfg);
    } catch (const UnsupportedConfig&) {
        if (selector.find(',') != std::string::npos) throw;
    }
    std::ifstream probe(selector);
    if (probe) return load_model_file(selector);
    if (const char* dir = std::getenv("EM0_MODEL_DIR")) {
        std::string path = std::string(dir) + "/" + selector;
        std::ifstream probe2(path);
        if (probe2) return load_model_file(path);
    }
    throw SchemaError("cannot find model file " + selector);
}

struct ImageOptions {
    std::string path;
    bool raw = false;
    std::string base_str;
    std::string entry_str;
    std::string sp_str;
};

uint32_t parse_u32(const std::string& s) {
    return static_cast<uint32_t>(std::stoul(s, nullptr, 0));
}

void add_image_options(CLI::App* cmd, ImageOptions& img) {
    cmd->add_option("image", img.path, "ELF32 or raw binary image")
        ->required();
    cmd->add_flag("--raw", img.raw, "treat the image as a raw binary");
    cmd->add_option("--base", img.base_str,
                    "load address for raw images (default flash base)");
    cmd->add_option("--entry", img.entry_str,
                    "entry point override (default: vector table / ELF)");
    cmd->add_option("--sp", img.sp_str, "initial stack pointer override");
}

struct LoadedProgram {
    MemoryMap map;
    uint32_t entry;
    uint32_t sp;
};

LoadedProgram load_program(const ImageOptions& img) {
    MemoryMap map;
    std::optional<uint32_t> base;
    if (img.raw || !img.base_str.empty())
        base = img.base_str.empty() ? MemoryMap::kFlashBase
                                    : parse_u32(img.base_str);
    auto report = load_image_file(map, img.path, base);

    uint32_t entry;
    if (!img.entry_str.empty())
        entry = parse_u32(img.entry_str) & ~1u;
    else if (report.entry)
        entry = *report.entry;
    else
        throw MalformedImage("image has no entry point; pass --entry");

    uint32_t sp;
    if (!img.sp_str.empty())
        sp = parse_u32(img.sp_str);
    else if (report.initial_sp)
        sp = *report.initial_sp;
    else
        sp = MemoryMap::kRamBase + map.ram_size();
    return {std::move(map), entry, sp};
}

RunReport run_program(const ImageOptions& img, const HardwareConfig& cfg,
                      uint64_t max_instructions) {
    auto prog = load_program(img);
    Simulator sim(std::move(prog.map), cfg);
    sim.set_entry(prog.entry, prog.sp);
    return sim.run(max_instructions);
}

int cmd_simulate(const ImageOptions& img, const std::string& config_str,
                 uint64_t max_instructions, const std::string& model_sel,
                 std::ostream& out) {
    auto cfg = HardwareConfig::parse(config_str);
    auto report = run_program(img, cfg, max_instructions);

    json j;
    j["exit"] = exit_reason_name(report.exit_reason);
    if (report.fault_address)
        j["fault_address"] = detail::hex32(*report.fault_address);
    if (!report.detail.empty()) j["detail"] = report.detail;
    j["instr_retired"] = report.instr_retired;
    j["cycles"] = report.counters.cycles;
    j["wall_time_s"] = report.wall_seconds(cfg);
    j["config"] = cfg.str();
    json regs;
    for (unsigned r = 0; r < 16; ++r)
        regs["r" + std::to_string(r)] =
            detail::hex32(report.final_state.regs[r]);
    j["registers"] = regs;
    j["counters"] = counters_json(report.counters);
    if (!model_sel.empty()) {
        auto model = resolve_model(model_sel);
        j["energy_nj"] = fmt_nj(estimate(report.counters, model));
    }
    out << j.dump(2) << "\n";
    return report.exit_reason == ExitReason::Breakpoint ? 0 : 1;
}

int cmd_profile(const ImageOptions& img, const std::string& config_str,
                uint64_t max_instructions, const std::string& name,
                const std::string& format, std::ostream& out,
                std::ostream& err) {
    auto cfg = HardwareConfig::parse(config_str);
    auto report = run_program(img, cfg, max_instructions);
    std::string label = name.empty() ? img.path : name;
    const auto& c = report.counters;
    if (format == "json") {
        json j;
        j["name"] = label;
        j.update(counters_json(c));
        out << j.dump(2) << "\n";
    } else {
        out << "name,c1,c2,c3,c4,c5,c6,cycles\n";
        out << label << "," << c.c1 << "," << c.c2 << "," << c.c3 << ","
            << c.c4 << "," << c.c5 << "," << c.c6 << "," << c.cycles << "\n";
    }
    if (report.exit_reason != ExitReason::Breakpoint) {
        err << "warning: run ended with " << exit_reason_name(report.exit_reason)
            << "\n";
        return 1;
    }
    return 0;
}

std::vector<std::pair<std::string, EventCounters>>
read_counters_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty counters file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("name,c1,c2,c3,c4,c5,c6", 0) != 0)
        throw SchemaError("counters CSV must start with name,c1,...,c6");
    std::vector<std::pair<std::string, EventCounters>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 7) throw SchemaError("short counters row");
        EventCounters c;
        c.c1 = std::stoull(fields[1]);
        c.c2 = std::stoull(fields[2]);
        c.c3 = std::stoull(fields[3]);
        c.c4 = std::stoull(fields[4]);
        c.c5 = std::stoull(fields[5]);
        c.c6 = std::stoull(fields[6]);
        rows.emplace_back(fields[0], c);
    }
    return rows;
}

int cmd_estimate(const std::string& counters_path,
                 const std::string& values_str, const std::string& model_sel,
                 std::ostream& out) {
    auto model = resolve_model(model_sel);
    if (!values_str.empty()) {
        EventCounters c;
        std::stringstream ss(values_str);
        std::string field;
        uint64_t* slots[6] = {&c.c1, &c.c2, &c.c3, &c.c4, &c.c5, &c.c6};
        for (unsigned i = 0; i < 6; ++i) {
            if (!std::getline(ss, field, ','))
                throw SchemaError("--values needs 6 comma-separated counts");
            *slots[i] = std::stoull(field);
        }
        out << fmt_nj(estimate(c, model)) << "\n";
        return 0;
    }
    std::ifstream in(counters_path);
    if (!in) throw SchemaError("cannot open " + counters_path);
    auto rows = read_counters_csv(in);
    double total = 0;
    for (const auto& [name, c] : rows) {
        double e = estimate(c, model);
        total += e;
        out << name << "," << fmt_nj(e) << "\n";
    }
    if (rows.size() > 1) out << "total," << fmt_nj(total) << "\n";
    return 0;
}

int cmd_train(const std::string& csv_path, const std::string& config_str,
              int k, uint64_t seed, bool uncentered,
              const std::string& model_out, const std::string& report_out,
              std::ostream& out, std::ostream& err) {
    auto cfg = HardwareConfig::parse(config_str);
    auto dataset = load_training_csv_file(csv_path);
    auto report = kfold_cv(dataset, cfg, k, seed, !uncentered);
    std::vector<std::string> warnings;
    auto model = fit_nnls(dataset, cfg, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";

    json jr;
    jr["samples"] = dataset.size();
    jr["k"] = report.k;
    jr["seed"] = report.seed;
    jr["r2_per_fold"] = report.r2_per_fold;
    jr["r2_mean"] = report.r2_mean;
    jr["r2_std"] = report.r2_std;
    jr["mape_percent"] = report.mape_percent;
    json jm;
    for (unsigned i = 0; i < 6; ++i)
        jm["c" + std::to_string(i + 1)] = model.beta[i];
    jr["beta_nj"] = jm;

    if (!model_out.empty()) {
        std::ofstream mo(model_out);
        if (!mo) throw SchemaError("cannot write " + model_out);
        save_model(mo, model);
    }
    if (!report_out.empty()) {
        std::ofstream ro(report_out);
        if (!ro) throw SchemaError("cannot write " + report_out);
        ro << jr.dump(2) << "\n";
    }
    out << jr.dump(2) << "\n";
    return 0;
}

int cmd_blocks(const ImageOptions& img, const std::string& roots_str,
               const std::string& model_sel, const std::string& counts_path,
               std::ostream& out) {
    auto prog = load_program(img);
    std::vector<uint32_t> roots;
    if (!roots_str.empty()) {
        std::stringstream ss(roots_str);
        std::string field;
        while (std::getline(ss, field, ',')) roots.push_back(parse_u32(field));
    }
    auto cfg = extract_cfg(prog.map, prog.entry, roots);

    json j;
    j["entry"] = detail::hex32(cfg.entry);
    if (!cfg.diagnostics.empty()) j["diagnostics"] = cfg.diagnostics;
    json blocks = json::array();
    for (const auto& [addr, b] : cfg.blocks) {
        json jb;
        jb["start"] = detail::hex32(b.start);
        jb["end"] = detail::hex32(b.end);
        jb["instr_count"] = b.instructions.size();
        json inst = json::array();
        for (const auto& i : b.instructions) inst.push_back(disassemble(i));
        jb["instructions"] = inst;
        const auto& c = b.base_counters;
        jb["base_counters"] = {{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3},
                               {"c4", c.c4}, {"c5", c.c5}, {"c6", c.c6}};
        jb["taken_delta"] = {{"c3", b.has_taken_exit ? 1 : 0}};
        json exits = json::array();
        for (const auto& x : b.exits) {
            json jx;
            jx["kind"] = edge_kind_name(x.kind);
            if (x.target)
                jx["target"] = detail::hex32(*x.target);
            else
                jx["target"] = "unknown";
            exits.push_back(jx);
        }
        jb["exits"] = exits;
        json flags = json::array();
        for (uint32_t a : b.unresolved_accesses)
            flags.push_back("unresolved data access at " + detail::hex32(a));
        jb["flags"] = flags;
        blocks.push_back(jb);
    }
    j["blocks"] = blocks;

    if (!counts_path.empty()) {
        if (model_sel.empty())
            throw SchemaError("--counts requires --model");
        std::ifstream in(counts_path);
        if (!in) throw SchemaError("cannot open " + counts_path);
        json jc = json::parse(in);
        std::map<uint32_t, uint64_t> exec_counts, taken_counts;
        const json exec_obj = jc.value("exec", json::object());
        const json taken_obj = jc.value("taken", json::object());
        for (const auto& [key, value] : exec_obj.items())
            exec_counts[parse_u32(key)] = value.get<uint64_t>();
        for (const auto& [key, value] : taken_obj.items())
            taken_counts[parse_u32(key)] = value.get<uint64_t>();
        auto model = resolve_model(model_sel);
        auto est = estimate_static(cfg, exec_counts, taken_counts, model);
        json je;
        je["total_nj"] = fmt_nj(est.total_nj);
        json bd = json::array();
        for (const auto& bc : est.breakdown) {
            bd.push_back({{"start", detail::hex32(bc.start)},
                          {"executions", bc.executions},
                          {"taken_exits", bc.taken_exits},
                          {"energy_nj", fmt_nj(bc.energy_nj)}});
        }
        je["per_block"] = bd;
        j["energy"] = je;
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_models(const std::string& format, std::ostream& out) {
    if (format == "json") {
        json rows = json::array();
        for (const auto& e : ModelRegistry::builtin().entries()) {
            json j;
            j["config"] = e.model.config.bracket_str();
            json beta;
            for (unsigned i = 0; i < 6; ++i)
                beta["c" + std::to_string(i + 1)] = e.model.beta_str[i];
            j["beta_nj"] = beta;
            j["measured_energy_j"] = e.measured_energy_j;
            j["mape_percent"] = e.mape_percent;
            rows.push_back(j);
        }
        out << rows.dump(2) << "\n";
    } else {
        out << models_list_text();
    }
    return 0;
}

} // namespace

std::string models_list_text() {
    std::ostringstream out;
    for (const auto& e : ModelRegistry::builtin().entries()) {
        out << e.model.config.bracket_str() << "  E =";
        for (unsigned i = 0; i < 6; ++i) {
            out << (i == 0 ? " " : " + ") << e.model.beta_str[i] << "*C"
                << (i + 1);
        }
        out << "  MAPE " << e.mape_percent << "%\n";
    }
    return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"ARMv6-M instruction set simulator and Cortex-M0 energy "
                 "modelling toolkit"};
    app.require_subcommand(1);

    ImageOptions img;
    std::string config_str = "20,OFF,0";
    std::string model_sel, name, format = "csv";
    uint64_t max_instructions = 100'000'000;

    auto* sim = app.add_subcommand("simulate", "run a program and report "
                                               "registers, cycles and time");
    add_image_options(sim, img);
    sim->add_option("--config", config_str, "hardware config, e.g. 24,ON,1");
    sim->add_option("--max-instr", max_instructions, "instruction budget");
    sim->add_option("--model", model_sel,
                    "energy model (builtin key or JSON file)");

    ImageOptions prof_img;
    std::string prof_config = "20,OFF,0", prof_name, prof_format = "csv";
    uint64_t prof_max = 100'000'000;
    auto* prof = app.add_subcommand("profile",
                                    "run a program and emit the c1..c6 row");
    add_image_options(prof, prof_img);
    prof->add_option("--config", prof_config, "hardware config");
    prof->add_option("--max-instr", prof_max, "instruction budget");
    prof->add_option("--name", prof_name, "row label (default: image path)");
    prof->add_option("--format", prof_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string est_counters, est_values, est_model;
    auto* est = app.add_subcommand("estimate",
                                   "energy from a counters row and a model");
    est->add_option("--counters", est_counters, "profile CSV file");
    est->add_option("--values", est_values, "inline c1,...,c6 counts");
    est->add_option("--model", est_model, "energy model")->required();

    std::string train_csv, train_config = "20,OFF,0", train_model_out,
                train_report_out;
    int train_k = 10;
    uint64_t train_seed = 0;
    bool train_uncentered = false;
    auto* train = app.add_subcommand("train",
                                     "fit an NNLS energy model from a CSV");
    train->add_option("csv", train_csv, "training data CSV")->required();
    train->add_option("--config", train_config,
                      "config the model is bound to");
    train->add_option("--k", train_k, "cross-validation folds");
    train->add_option("--seed", train_seed, "fold shuffle seed");
    train->add_flag("--uncentered-r2", train_uncentered,
                    "use uncentered total sum of squares");
    train->add_option("-o,--output", train_model_out, "model JSON path");
    train->add_option("--report", train_report_out, "evaluation report path");

    ImageOptions blk_img;
    std::string blk_roots, blk_model, blk_counts;
    auto* blk = app.add_subcommand("blocks",
                                   "static basic-block analysis of an image");
    add_image_options(blk, blk_img);
    blk->add_option("--roots", blk_roots, "extra code roots, comma-separated");
    blk->add_option("--model", blk_model, "energy model for --counts pricing");
    blk->add_option("--counts", blk_counts,
                    "JSON with per-block exec/taken counts");

    std::string models_format = "text";
    auto* models = app.add_subcommand("models",
                                      "list the builtin energy models");
    models->add_option("--format", models_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(img, config_str, max_instructions, model_sel,
                                out);
        if (prof->parsed())
            return cmd_profile(prof_img, prof_config, prof_max, prof_name,
                               prof_format, out, err);
        if (est->parsed()) {
            if (est_counters.empty() == est_values.empty())
                throw SchemaError(
                    "pass exactly one of --counters or --values");
            return cmd_estimate(est_counters, est_values, est_model, out);
        }
        if (train->parsed())
            return cmd_train(train_csv, train_config, train_k, train_seed,
                             train_uncentered, train_model_out,
                             train_report_out, out, err);
        if (blk->parsed())
            return cmd_blocks(blk_img, blk_roots, blk_model, blk_counts, out);
        if (models->parsed()) return cmd_models(models_format, out);
    } catch (const SimError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace em0::cli
