/*
 * Copyright 2026 The gaitdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gaitdyn/cli.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/ingest.hpp"
#include "gaitdyn/pipeline.hpp"
#include "gaitdyn/svg.hpp"
#include "gaitdyn/textio.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>

namespace gaitdyn::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum Command : unsigned {
    kSynth = 1u << 0,
    kComplexity = 1u << 1,
    kPssaTrain = 1u << 2,
    kPssaClassify = 1u << 3,
    kCycles = 1u << 4,
    kBuild = 1u << 5,
    kCompare = 1u << 6,
    kRender = 1u << 7,
};

constexpr unsigned kAll = 0xffu;
constexpr unsigned kRecordings = kComplexity | kPssaTrain | kPssaClassify | kCycles | kBuild;
constexpr unsigned kCoding = kCycles | kBuild;

struct CommandInfo {
    Command id;
    const char* name;
    const char* help;
};

const CommandInfo kCommands[] = {
    {kSynth, "synth", "write a synthetic walker recording with its true cycle boundaries"},
    {kComplexity, "complexity", "LZ complexity of ternary and hca codings of one sensor"},
    {kPssaTrain, "pssa-train", "fit a PSSA subject model from one recording per subject"},
    {kPssaClassify, "pssa-classify", "classify recording segments with a PSSA model"},
    {kCycles, "cycles", "code a recording and partition it into rhythmic cycles"},
    {kBuild, "passtensor-build", "stack the cycles of a recording into a passtensor"},
    {kCompare, "passtensor-compare", "compare two passtensors built on one code book"},
    {kRender, "render", "draw the rings and cylinder views of a passtensor"},
};

enum class Type { Int, Real, String, Bool, StringList, IntList, Pair };

struct Field {
    const char* key;
    Type type;
    json def;  ///< null means optional
    unsigned commands;
    const char* help;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"output", Type::String, "gaitdyn-out", kAll, "output directory"},
        {"inputs", Type::StringList, json::array(), kAll & ~kSynth, "input files"},
        {"format", Type::String, "fixture", kRecordings, "recording format: fixture, marea or hugadb"},
        {"subjects", Type::StringList, json::array(), kRecordings, "subject id per input (default: file name)"},
        {"activity", Type::String, "", kRecordings, "activity label attached to the recordings"},
        {"sample_rate", Type::Real, 128.0, kRecordings, "fixture sample rate when the file does not state one"},
        {"sensors", Type::StringList, json::array(), kPssaTrain | kPssaClassify, "sensors to keep (default: all)"},

        {"seed", Type::Int, 1, kSynth, "random seed"},
        {"cycles", Type::Int, 50, kSynth, "number of full cycles"},
        {"period_mean", Type::Real, 128.0, kSynth, "mean cycle length in samples"},
        {"period_jitter", Type::Real, 0.0, kSynth, "cycle length jitter in samples"},
        {"walker_sensors", Type::Int, 2, kSynth, "sensor count (2 to 4)"},
        {"noise_sd", Type::Real, 0.02, kSynth, "additive noise sd"},
        {"tail", Type::Int, 8, kSynth, "samples after the last full cycle"},
        {"subject", Type::String, "walker", kSynth, "subject id written to the recording"},

        {"sensor", Type::String, "LF", kComplexity, "sensor to code"},
        {"window", Type::Pair, json::array({0, 300}), kComplexity, "sample window begin,end"},
        {"window", Type::Pair, nullptr, kCoding, "sample window begin,end (default: whole recording)"},
        {"alpha", Type::Real, 0.3, kComplexity | kPssaTrain, "lower ternary quantile"},
        {"beta", Type::Real, 0.7, kComplexity | kPssaTrain, "upper ternary quantile"},
        {"clusters", Type::IntList, json::array({27}), kComplexity, "hca cluster counts, one row each"},
        {"linkage", Type::String, "ward", kComplexity | kCoding, "ward, complete or average"},
        {"scaling", Type::String, "zscore", kComplexity | kCoding, "zscore or none"},

        {"pss_count", Type::Int, 300, kPssaTrain, "number of principle states"},
        {"coverage", Type::Real, nullptr, kPssaTrain, "coverage target; overrides pss_count"},
        {"segment_length", Type::Int, 1000, kPssaTrain, "segment length in samples"},
        {"max_keys", Type::Int, 10, kPssaTrain, "most key states per subject"},
        {"model", Type::String, nullptr, kPssaClassify, "model file from pssa-train"},

        {"feet", Type::StringList, json::array({"LF", "RF"}), kCoding, "sensors sharing the feet code book"},
        {"body", Type::StringList, json::array(), kCoding, "sensors with their own code book each"},
        {"feet_clusters", Type::Int, 10, kCoding, "feet code words"},
        {"body_clusters", Type::Int, 8, kCoding, "code words per body sensor"},
        {"min_runs", Type::Int, 5, kCoding, "fewest runs for a landmark candidate"},
        {"recurrence_weight", Type::Real, 1.0, kCoding, "weight of the recurrence variance"},
        {"code_books", Type::StringList, json::array(), kCoding, "reuse these code book files instead of fitting"},
        {"bins", Type::Int, 128, kBuild, "angular bins per cycle"},
        {"cycle_range", Type::Pair, nullptr, kBuild, "first,last cycle (1-based, inclusive)"},
        {"reference_cycles", Type::Bool, false, kBuild, "keep cycles 3..70 when no cycle_range is given"},

        {"skeleton_weight", Type::Real, 0.7, kCompare, "distance weight of skeleton disagreement"},
        {"stochastic_weight", Type::Real, 0.3, kCompare, "distance weight of histogram disagreement"},
        {"threshold", Type::Real, nullptr, kCompare, "accept when the distance is at most this"},

        {"palette", Type::String, "", kRender, "comma-separated #rrggbb colours (default: built in)"},
        {"view", Type::String, "both", kRender, "cylinder view: unrolled, isometric or both"},
        {"cycle", Type::Int, 0, kRender, "cycle drawn as rings, 1-based; 0 draws the skeleton"},
        {"title", Type::String, "", kRender, "figure title"},
    };
    return table;
}

const Field* find_field(const std::string& key, unsigned command) {
    for (const auto& f : fields()) {
        if (key == f.key && (f.commands & command)) return &f;
    }
    return nullptr;
}

std::string flag_name(const std::string& key) {
    auto s = key;
    std::replace(s.begin(), s.end(), '_', '-');
    return "--" + s;
}

bool non_negative_int(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

void check_value(const Field& f, const json& v, const std::string& where) {
    const auto bad = [&](const char* want) {
        throw ConfigError(fmt::format("{}: '{}' must be {}, got {}", where, f.key, want, v.dump()));
    };
    if (v.is_null()) {
        if (!f.def.is_null()) bad("set");
        return;
    }
    switch (f.type) {
        case Type::Int:
            if (!non_negative_int(v)) bad("a non-negative integer");
            break;
        case Type::Real:
            if (!v.is_number() || !std::isfinite(v.get<double>())) bad("a finite number");
            break;
        case Type::String:
            if (!v.is_string()) bad("a string");
            break;
        case Type::Bool:
            if (!v.is_boolean()) bad("true or false");
            break;
        case Type::StringList:
            if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); })) bad("a list of strings");
            break;
        case Type::IntList:
            if (!v.is_array() || !std::all_of(v.begin(), v.end(), non_negative_int)) bad("a list of non-negative integers");
            break;
        case Type::Pair:
            if (!v.is_array() || v.size() != 2 || !non_negative_int(v[0]) || !non_negative_int(v[1])) bad("a pair of non-negative integers");
            break;
    }
}

json parse_flag(const Field& f, const std::string& text) {
    const auto where = flag_name(f.key);
    if (f.def.is_null() && (text == "none" || text == "null")) return nullptr;
    const auto integer = [&](std::string_view s) -> json {
        const auto v = parse_int(trim(s));
        if (!v || *v < 0) throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", where, s));
        return *v;
    };
    const auto list = [&](auto conv) {
        json out = json::array();
        if (trim(text).empty()) return out;
        for (const auto& part : split(text, ',')) out.push_back(conv(part));
        return out;
    };
    switch (f.type) {
        case Type::Int: return integer(text);
        case Type::Real: {
            const auto v = parse_double(trim(text));
            if (!v) throw ConfigError(fmt::format("{}: '{}' is not a number", where, text));
            return *v;
        }
        case Type::String: return text;
        case Type::Bool: return text == "true";
        case Type::StringList: return list([](const std::string& s) { return json(trim(s)); });
        case Type::IntList: return list(integer);
        case Type::Pair: {
            auto v = list(integer);
            if (v.size() != 2) throw ConfigError(fmt::format("{}: expected two comma-separated integers, got '{}'", where, text));
            return v;
        }
    }
    return nullptr;
}

// ---- typed access to a resolved config

struct Config {
    json values;

    const json& at(const char* k) const { return values.at(k); }
    bool has(const char* k) const { return !values.at(k).is_null(); }
    std::size_t size(const char* k) const { return at(k).get<std::size_t>(); }
    double real(const char* k) const { return at(k).get<double>(); }
    std::string str(const char* k) const { return at(k).get<std::string>(); }
    bool flag(const char* k) const { return at(k).get<bool>(); }
    std::vector<std::string> strings(const char* k) const { return at(k).get<std::vector<std::string>>(); }
    std::vector<std::size_t> sizes(const char* k) const { return at(k).get<std::vector<std::size_t>>(); }
    std::pair<std::size_t, std::size_t> pair(const char* k) const { return {at(k)[0].get<std::size_t>(), at(k)[1].get<std::size_t>()}; }
};

// ---- hashing of inputs

std::string hash_path(const fs::path& p) {
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(p)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        std::string listing;
        for (const auto& f : files) listing += fs::relative(f, p).generic_string() + ' ' + sha256_hex(read_text_file(f)) + '\n';
        return sha256_hex(listing);
    }
    return sha256_hex(read_text_file(p));
}

struct Run {
    Config cfg;
    std::string command;
    std::vector<std::string> input_paths;
    std::map<std::string, std::string> artifacts;

    std::string read_input(const std::string& path) {
        if (!fs::exists(path)) throw DataError(fmt::format("missing file {}", path));
        input_paths.push_back(path);
        return read_text_file(path);
    }
};

void finish(Run& run) {
    const fs::path dir = run.cfg.str("output");
    fs::create_directories(dir);
    const auto config_text = run.cfg.values.dump(2) + "\n";
    write_text_file(dir / "config.json", config_text);

    json inputs = json::array();
    for (const auto& p : run.input_paths) inputs.push_back({{"path", p}, {"sha256", hash_path(p)}});
    json artifacts = json::array();
    for (const auto& [name, bytes] : run.artifacts) {
        write_text_file(dir / name, bytes);
        artifacts.push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    const json manifest = {
        {"tool", "gaitdyn"},
        {"version", kVersion},
        {"command", run.command},
        {"config_sha256", sha256_hex(config_text)},
        {"inputs", inputs},
        {"artifacts", artifacts},
        {"libraries", {{"fmt", FMT_VERSION}, {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}}},
    };
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---- recordings

std::vector<Channel> channels_of(const std::vector<std::string>& sensors) {
    std::vector<Channel> out;
    for (const auto& s : sensors)
        for (auto a : {Axis::X, Axis::Y, Axis::Z}) out.push_back({s, a});
    return out;
}

std::vector<TimeSeriesFrame> load_recordings(Run& run, const std::vector<std::string>& sensors) {
    const auto paths = run.cfg.strings("inputs");
    const auto subjects = run.cfg.strings("subjects");
    const auto format = run.cfg.str("format");
    const auto activity = run.cfg.str("activity");
    if (paths.empty()) throw ConfigError("no input recordings given");
    if (!subjects.empty() && subjects.size() != paths.size()) {
        throw ConfigError(fmt::format("{} subject ids for {} inputs", subjects.size(), paths.size()));
    }
    std::vector<TimeSeriesFrame> out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const fs::path p = paths[i];
        if (!fs::exists(p)) throw DataError(fmt::format("missing input {}", paths[i]));
        run.input_paths.push_back(paths[i]);
        const auto subject = subjects.empty() ? (fs::is_directory(p) ? p.filename().string() : p.stem().string()) : subjects[i];
        TimeSeriesFrame f = [&] {
            if (format == "fixture") return ingest::load_fixture(p, subject, run.cfg.real("sample_rate"));
            if (format == "hugadb") return ingest::load_hugadb(p, subject);
            if (format == "marea") {
                return ingest::load_marea(p, subject, sensors.empty() ? std::vector<std::string>{"LF", "RF", "Waist", "Wrist"} : sensors);
            }
            throw ConfigError(fmt::format("unknown format '{}' (fixture, marea, hugadb)", format));
        }();
        if (!sensors.empty()) f = f.select(channels_of(sensors));
        if (!activity.empty()) f = TimeSeriesFrame(f.values(), f.channels(), f.sample_rate_hz(), f.subject_id(), activity);
        out.push_back(std::move(f));
    }
    return out;
}

TimeSeriesFrame load_one(Run& run, const std::vector<std::string>& sensors) {
    if (run.cfg.strings("inputs").size() != 1) throw ConfigError(fmt::format("{} takes exactly one input", run.command));
    return load_recordings(run, sensors).front();
}

hca::ClusterOptions cluster_options(const Config& c) {
    hca::ClusterOptions o;
    o.linkage = hca::parse_linkage(c.str("linkage"));
    o.scaling = hca::parse_scaling(c.str("scaling"));
    return o;
}

// ---- subcommands

void cmd_synth(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    ingest::WalkerOptions o;
    o.seed = c.size("seed");
    o.cycles = c.size("cycles");
    o.period_mean = c.real("period_mean");
    o.period_jitter = c.real("period_jitter");
    o.sensors = c.size("walker_sensors");
    o.noise_sd = c.real("noise_sd");
    o.tail = c.size("tail");
    const auto w = ingest::synthesize_walker(o);
    const TimeSeriesFrame f(w.frame.values(), w.frame.channels(), w.frame.sample_rate_hz(), c.str("subject"), w.frame.activity());
    std::string truth = "cycle,start,length\n";
    for (std::size_t k = 0; k < w.cycle_lengths.size(); ++k) truth += fmt::format("{},{},{}\n", k + 1, w.boundaries[k], w.cycle_lengths[k]);
    run.artifacts["walker.csv"] = ingest::fixture_text(f);
    run.artifacts["truth.csv"] = truth;
    const auto report = fmt::format("samples {}\nsensors {}\ncycles {}\n", f.length(), f.sensors().size(), w.cycle_lengths.size());
    run.artifacts["report.txt"] = report;
    out << report;
}

void cmd_complexity(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    const auto sensor = c.str("sensor");
    auto frame = load_one(run, {sensor});
    const auto [b, e] = c.pair("window");
    if (b >= e) throw ConfigError(fmt::format("window [{}, {}) is empty", b, e));
    pipeline::ComplexityOptions o;
    o.alpha = c.real("alpha");
    o.beta = c.real("beta");
    o.clusters = c.sizes("clusters");
    o.cluster = cluster_options(c);
    const auto r = pipeline::complexity_study(SensorTriplet(frame.slice(b, e)), o);
    std::vector<std::string> labels;
    std::uint32_t top = 0;
    for (const auto& row : r.rows) {
        labels.push_back(row.label);
        top = std::max(top, row.alphabet);
    }
    const auto table = pipeline::complexity_table(r);
    run.artifacts["complexity.txt"] = table;
    run.artifacts["complexity.svg"] =
        svg::code_strips(r.sequences, labels, svg::default_palette(top), fmt::format("{} samples {}..{}", sensor, b, e));
    out << table;
}

void cmd_pssa_train(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    const auto frames = load_recordings(run, c.strings("sensors"));
    pipeline::PssaOptions o;
    o.alpha = c.real("alpha");
    o.beta = c.real("beta");
    o.pss_count = c.size("pss_count");
    if (c.has("coverage")) o.coverage = c.real("coverage");
    o.segment_length = c.size("segment_length");
    o.max_keys = c.size("max_keys");
    const auto r = pipeline::train_pssa(frames, o);

    const auto order = pssa::cluster_sigma(r.sigma);
    std::vector<std::vector<double>> values;
    std::vector<std::string> rows, cols;
    for (const auto& row : r.sigma.rows) {
        values.push_back(row.proportions);
        rows.push_back(fmt::format("{}:{}", row.subject_id, row.segment_index));
    }
    for (const auto& s : r.model.pss) cols.push_back(pssa::state_label(s));

    const auto report = pipeline::pssa_report(r);
    run.artifacts["model.txt"] = pssa::serialize(r.model);
    run.artifacts["sigma.csv"] = pssa::sigma_to_csv(r.sigma);
    run.artifacts["sigma.svg"] = svg::heatmap(values, order.rows, order.columns, rows, cols, "segment proportions");
    run.artifacts["coverage.csv"] = pipeline::coverage_csv(r.table);
    run.artifacts["report.txt"] = report;
    out << report;
}

void cmd_pssa_classify(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    if (!c.has("model")) throw ConfigError("pssa-classify needs --model");
    const auto path = c.str("model");
    const auto model = pssa::deserialize_pssa_model(run.read_input(path), path);
    auto sensors = c.strings("sensors");
    if (sensors.empty()) {
        for (const auto& ch : model.coding.channels) {
            if (std::find(sensors.begin(), sensors.end(), ch.sensor) == sensors.end()) sensors.push_back(ch.sensor);
        }
    }
    auto frames = load_recordings(run, sensors);
    for (auto& f : frames) f = f.select(model.coding.channels);
    const auto preds = pipeline::classify_frames(model, frames);
    std::size_t fallbacks = 0;
    for (const auto& p : preds) fallbacks += p.result.fallback;
    const auto report =
        fmt::format("segments {}\naccuracy {:.6f}\nfallbacks {}\n", preds.size(), pipeline::prediction_accuracy(preds), fallbacks);
    run.artifacts["predictions.csv"] = pipeline::predictions_csv(preds);
    run.artifacts["report.txt"] = report;
    out << report;
}

pipeline::CycleResult coded_cycles(Run& run) {
    const auto& c = run.cfg;
    pipeline::CycleOptions o;
    o.feet = c.strings("feet");
    o.body = c.strings("body");
    o.feet_clusters = c.size("feet_clusters");
    o.body_clusters = c.size("body_clusters");
    o.cluster = cluster_options(c);
    if (c.has("window")) o.window = c.pair("window");
    o.min_runs = c.size("min_runs");
    o.recurrence_weight = c.real("recurrence_weight");
    std::vector<l1g2::LocalCode> frozen;
    for (const auto& p : c.strings("code_books")) frozen.push_back(l1g2::deserialize_local_code(run.read_input(p), p));

    auto sensors = o.feet;
    sensors.insert(sensors.end(), o.body.begin(), o.body.end());
    const auto frame = load_one(run, sensors);
    auto r = pipeline::run_cycles(frame, o, frozen);

    std::vector<std::vector<std::uint32_t>> strips;
    std::uint32_t top = 0;
    for (std::size_t j = 0; j < r.seq.arity(); ++j) {
        const auto p = r.seq.projection(j);
        strips.emplace_back(p.symbols().begin(), p.symbols().end());
        top = std::max(top, p.alphabet_size());
    }
    for (const auto& code : r.codes) run.artifacts["codebook-" + code.label + ".txt"] = l1g2::serialize(code);
    run.artifacts["codes.svg"] = svg::code_strips(strips, r.seq.labels(), svg::default_palette(top), "cluster codes");
    run.artifacts["cycles.csv"] = landmark::cycle_table_csv(r.partition);
    return r;
}

void cmd_cycles(Run& run, std::ostream& out) {
    const auto r = coded_cycles(run);
    const auto report = pipeline::cycles_report(r);
    run.artifacts["report.txt"] = report;
    out << report;
}

void cmd_build(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    const auto r = coded_cycles(run);
    std::optional<passtensor::CycleRange> range;
    if (c.has("cycle_range")) {
        const auto [first, last] = c.pair("cycle_range");
        range = passtensor::CycleRange{first, last};
    } else if (c.flag("reference_cycles")) {
        range = passtensor::kReferenceCycleRange;
    }
    const auto pt = passtensor::build_passtensor(r.seq, r.partition, c.size("bins"), range, r.code_book_id);
    const auto report = pipeline::cycles_report(r) +
                        fmt::format("passtensor {} x {} x {}\nfirst_cycle {}\n", pt.cycles, pt.rings, pt.bins, pt.first_cycle);
    run.artifacts["passtensor.txt"] = passtensor::serialize(pt);
    run.artifacts["report.txt"] = report;
    out << report;
}

void cmd_compare(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    const auto paths = c.strings("inputs");
    if (paths.size() != 2) throw ConfigError("passtensor-compare takes exactly two passtensor files");
    const auto a = passtensor::deserialize_passtensor(run.read_input(paths[0]), paths[0]);
    const auto b = passtensor::deserialize_passtensor(run.read_input(paths[1]), paths[1]);
    const auto d = passtensor::compare_passtensors(a, b, {c.real("skeleton_weight"), c.real("stochastic_weight")});
    auto report = passtensor::diff_report(d, a, b);
    if (c.has("threshold")) {
        report += fmt::format("threshold {:.6f}\ndecision {}\n", c.real("threshold"), d.distance <= c.real("threshold") ? "accept" : "reject");
    }
    run.artifacts["report.txt"] = report;
    out << report;
}

void cmd_render(Run& run, std::ostream& out) {
    const auto& c = run.cfg;
    const auto paths = c.strings("inputs");
    if (paths.size() != 1) throw ConfigError("render takes exactly one passtensor file");
    const auto pt = passtensor::deserialize_passtensor(run.read_input(paths[0]), paths[0]);
    const auto view = c.str("view");
    if (view != "both") passtensor::parse_view(view);

    std::uint32_t top = 0;
    for (auto a : pt.ring_alphabets) top = std::max(top, a);
    const auto palette = c.str("palette").empty() ? svg::default_palette(top) : svg::parse_palette(c.str("palette"));
    const auto k = c.size("cycle");
    if (k > pt.cycles) throw ConfigError(fmt::format("cycle {} requested but the passtensor holds {}", k, pt.cycles));
    const auto grid = k == 0 ? passtensor::skeleton(pt) : pt.grid(k - 1);
    const auto title = c.str("title");
    run.artifacts["rings.svg"] = passtensor::render_rings(grid, palette, pt.ring_labels, title);
    for (const char* v : {"unrolled", "isometric"}) {
        if (view == "both" || view == v) {
            run.artifacts[fmt::format("cylinder-{}.svg", v)] = passtensor::render_cylinder(pt, palette, passtensor::parse_view(v), title);
        }
    }
    for (const auto& [name, bytes] : run.artifacts) out << name << '\n';
}

void dispatch(Command id, Run& run, std::ostream& out) {
    switch (id) {
        case kSynth: return cmd_synth(run, out);
        case kComplexity: return cmd_complexity(run, out);
        case kPssaTrain: return cmd_pssa_train(run, out);
        case kPssaClassify: return cmd_pssa_classify(run, out);
        case kCycles: return cmd_cycles(run, out);
        case kBuild: return cmd_build(run, out);
        case kCompare: return cmd_compare(run, out);
        case kRender: return cmd_render(run, out);
    }
}

// ---- config resolution: defaults, then the config file, then flags

json defaults_for(unsigned command) {
    json out = json::object();
    for (const auto& f : fields()) {
        if ((f.commands & command) && !out.contains(f.key)) out[f.key] = f.def;
    }
    return out;
}

void apply_file(json& cfg, const std::string& path, const std::string& command, unsigned id) {
    if (!fs::exists(path)) throw ConfigError(fmt::format("config file {} not found", path));
    json file;
    try {
        file = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
    if (!file.is_object()) throw ConfigError(fmt::format("{}: top level must be an object", path));
    for (const auto& [key, value] : file.items()) {
        if (key == "command") {
            if (value != command) throw ConfigError(fmt::format("{}: written for '{}', not '{}'", path, value.dump(), command));
            continue;
        }
        const auto* f = find_field(key, id);
        if (!f) throw ConfigError(fmt::format("{}: unknown key '{}' for {}", path, key, command));
        check_value(*f, value, path);
        cfg[key] = value;
    }
}

void error_line(std::ostream& err, const char* kind, int code, const std::string& message) {
    err << json{{"error", kind}, {"exit_code", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Symbolic gait dynamics: coding, PSSA, cycles and passtensors", "gaitdyn");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    struct Slot {
        CLI::App* app = nullptr;
        std::string config;
        std::vector<std::string> inputs;
        std::map<std::string, std::string> text;
        std::map<std::string, bool> flags;
        std::map<std::string, CLI::Option*> options;
    };
    std::map<unsigned, Slot> slots;
    for (const auto& info : kCommands) {
        auto& s = slots[info.id];
        s.app = app.add_subcommand(info.name, info.help);
        s.app->add_option("--config", s.config, "JSON config file; flags override it");
        std::vector<std::string> seen;
        for (const auto& f : fields()) {
            if (!(f.commands & info.id) || std::find(seen.begin(), seen.end(), f.key) != seen.end()) continue;
            seen.push_back(f.key);
            const std::string key = f.key;
            if (key == "inputs") {
                s.options[key] = s.app->add_option("inputs", s.inputs, f.help);
            } else if (f.type == Type::Bool) {
                const auto name = flag_name(key);
                s.options[key] = s.app->add_flag(name + ",!--no-" + name.substr(2), s.flags[key], f.help);
            } else {
                s.options[key] = s.app->add_option(flag_name(key), s.text[key], f.help);
            }
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        error_line(err, to_string(ErrorKind::Config), 2, e.what());
        return 2;
    }

    for (const auto& info : kCommands) {
        auto& s = slots.at(info.id);
        if (!s.app->parsed()) continue;
        try {
            Run r;
            r.command = info.name;
            json cfg = defaults_for(info.id);
            if (!s.config.empty()) apply_file(cfg, s.config, info.name, info.id);
            for (const auto& [key, opt] : s.options) {
                if (opt->count() == 0) continue;
                const auto* f = find_field(key, info.id);
                json v;
                if (key == "inputs") v = s.inputs;
                else if (f->type == Type::Bool) v = s.flags.at(key);
                else v = parse_flag(*f, s.text.at(key));
                check_value(*f, v, flag_name(key));
                cfg[key] = v;
            }
            cfg["command"] = info.name;
            r.cfg.values = std::move(cfg);
            dispatch(info.id, r, out);
            finish(r);
            return 0;
        } catch (const Error& e) {
            const int code = static_cast<int>(e.kind());
            error_line(err, to_string(e.kind()), code, e.what());
            return code;
        } catch (const fs::filesystem_error& e) {
            error_line(err, to_string(ErrorKind::Data), 3, e.what());
            return 3;
        }
    }
    return 2;
}

}  // namespace gaitdyn::cli
