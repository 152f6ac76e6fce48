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

#include "gaitdyn/pipeline.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/symbolic.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

namespace gaitdyn::pipeline {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ComplexityResult complexity_study(const SensorTriplet& triplet, const ComplexityOptions& options) {
    if (triplet.length() == 0) throw PreconditionError("empty window");
    ComplexityResult out;
    out.sensor = triplet.sensor();
    const auto add = [&](std::string label, const SymbolSequence& s) {
        out.rows.push_back({std::move(label), s.alphabet_size(), s.size(), complexity::lz76_complexity(s)});
        out.sequences.emplace_back(s.symbols().begin(), s.symbols().end());
    };

    const auto& frame = triplet.frame();
    const auto coding = symbolic::fit_ternary(std::span(&frame, 1), options.alpha, options.beta);
    const auto states = symbolic::encode_ternary(frame, coding);
    std::vector<SymbolSequence> axes;
    for (std::size_t d = 0; d < 3; ++d) {
        axes.push_back(from_ternary(states.dimension(d)));
        add(fmt::format("{} ternary", axis_name(coding.channels[d].axis)), axes.back());
    }
    add("XYZ naive", complexity::couple_naive(axes));

    const auto res = symbolic::resultant_acceleration(triplet);
    const symbolic::Cutoffs cut{symbolic::empirical_quantile(res, options.alpha), symbolic::empirical_quantile(res, options.beta)};
    add("|A| ternary", from_ternary(symbolic::encode_ternary(res, cut)));

    for (auto h : options.clusters) {
        const auto c = hca::cluster_columns(triplet.values(), h, options.cluster);
        add(fmt::format("XYZ hca H={}", h), SymbolSequence(c.assignments, static_cast<std::uint32_t>(h), Provenance::HcaCluster));
    }
    return out;
}

std::string complexity_table(const ComplexityResult& result) {
    std::string out = fmt::format("# sensor {}\n{:<16} {:>8} {:>8} {:>8}\n", result.sensor, "sequence", "alphabet", "length", "lz76");
    for (const auto& r : result.rows) out += fmt::format("{:<16} {:>8} {:>8} {:>8}\n", r.label, r.alphabet, r.length, r.lz);
    return out;
}

PssaTrainResult train_pssa(std::span<const TimeSeriesFrame> frames, const PssaOptions& options) {
    if (frames.size() < 2) throw PreconditionError("PSSA training needs at least two recordings");
    PssaTrainResult out;
    out.model.coding = symbolic::fit_ternary(frames, options.alpha, options.beta);
    std::vector<symbolic::StateVectorSequence> seqs;
    std::vector<pssa::LabelledSequence> labelled;
    for (const auto& f : frames) {
        seqs.push_back(symbolic::encode_ternary(f, out.model.coding));
        labelled.push_back({f.subject_id(), seqs.back()});
    }
    out.table = pssa::build_state_table(seqs);
    const std::size_t count =
        options.coverage ? pssa::pss_count_for_coverage(out.table, *options.coverage) : options.pss_count;
    out.model.pss = pssa::principle_states(out.table, count);
    out.model.segment_length = options.segment_length;
    out.sigma = pssa::build_proportion_matrix(labelled, out.model.pss, options.segment_length);
    std::tie(out.train, out.test) = pssa::split_alternating(out.sigma);
    if (out.test.rows.empty()) throw PreconditionError("no held-out segments; recordings are too short for the segment length");
    out.model.keys = pssa::train_key_pss(out.train, options.max_keys);
    out.train_accuracy = out.model.keys.training_accuracy;
    out.test_accuracy = pssa::accuracy(out.model.keys, out.test);
    return out;
}

std::string pssa_report(const PssaTrainResult& r) {
    const auto curve = pssa::coverage_curve(r.table);
    std::string out;
    out += fmt::format("subjects {}\n", r.sigma.subjects().size());
    out += fmt::format("distinct_states {}\n", r.table.distinct());
    out += fmt::format("pss_count {}\n", r.model.pss.size());
    out += fmt::format("coverage {:.6f}\n", curve.at(r.model.pss.size() - 1));
    out += fmt::format("segment_length {}\n", r.model.segment_length);
    out += fmt::format("segments {} train {} test {}\n", r.sigma.rows.size(), r.train.rows.size(), r.test.rows.size());
    out += fmt::format("train_accuracy {:.6f}\n", r.train_accuracy);
    out += fmt::format("test_accuracy {:.6f}\n", r.test_accuracy);
    for (const auto& s : r.model.keys.subjects) {
        std::vector<std::string> keys;
        for (auto k : s.key_states) keys.push_back(pssa::state_label(r.model.pss[k]));
        out += fmt::format("subject {} threshold {:.6f} margin {:.6f} keys {}\n", s.subject_id, s.threshold, s.margin, join(keys, " "));
    }
    return out;
}

std::string coverage_csv(const pssa::SystemStateTable& table) {
    const auto pool = pssa::coverage_curve(table, pssa::CoverageDenominator::PoolSize);
    const auto distinct = pssa::coverage_curve(table, pssa::CoverageDenominator::DistinctStates);
    std::string out = "n,coverage_pool,coverage_distinct\n";
    for (std::size_t i = 0; i < pool.size(); ++i) out += fmt::format("{},{:.9f},{:.9f}\n", i + 1, pool[i], distinct[i]);
    return out;
}

std::vector<Prediction> classify_frames(const pssa::PssaModel& model, std::span<const TimeSeriesFrame> frames) {
    std::vector<Prediction> out;
    for (const auto& f : frames) {
        const auto seq = symbolic::encode_ternary(f, model.coding);
        const auto props = pssa::segment_proportions(seq, model.pss, model.segment_length);
        for (std::size_t i = 0; i < props.size(); ++i) out.push_back({f.subject_id(), i, pssa::classify_segment(model.keys, props[i])});
    }
    return out;
}

std::string predictions_csv(const std::vector<Prediction>& predictions) {
    std::string out = "recording,segment,predicted,fallback,correct\n";
    for (const auto& p : predictions) {
        out += fmt::format("{},{},{},{},{}\n", p.subject_id, p.segment_index, p.result.subject_id, p.result.fallback ? 1 : 0,
                           p.result.subject_id == p.subject_id ? 1 : 0);
    }
    return out;
}

double prediction_accuracy(const std::vector<Prediction>& predictions) {
    if (predictions.empty()) return 0.0;
    std::size_t ok = 0;
    for (const auto& p : predictions) ok += p.result.subject_id == p.subject_id;
    return static_cast<double>(ok) / static_cast<double>(predictions.size());
}

std::string combined_code_book_id(std::span<const l1g2::LocalCode> codes) {
    if (codes.size() == 1) return l1g2::code_book_id(codes.front());
    std::string ids;
    for (const auto& c : codes) ids += l1g2::code_book_id(c) + '\n';
    return sha256_hex(ids).substr(0, 16);
}

CycleResult run_cycles(const TimeSeriesFrame& frame, const CycleOptions& options, std::span<const l1g2::LocalCode> frozen) {
    if (options.feet.empty() && options.body.empty()) throw ConfigError("no sensors selected for cycle coding");
    const auto f = options.window ? frame.slice(options.window->first, options.window->second) : frame;

    const auto code_for = [&](const std::string& label, const std::vector<std::string>& sensors, std::size_t clusters,
                              std::span<const SensorTriplet> sources) {
        if (frozen.empty()) return l1g2::fit_local_code(sources, clusters, label, options.cluster);
        for (const auto& c : frozen) {
            if (c.label != label) continue;
            if (c.source_sensors != sensors) {
                throw PreconditionError(fmt::format("code book '{}' was fitted on {}, not {}", label, join(c.source_sensors, ","),
                                                    join(sensors, ",")));
            }
            return c;
        }
        throw PreconditionError(fmt::format("no code book labelled '{}' among the supplied ones", label));
    };

    CycleResult out;
    out.sample_rate_hz = f.sample_rate_hz();
    std::vector<SymbolSequence> parts;
    std::vector<std::string> labels;
    if (!options.feet.empty()) {
        std::vector<SensorTriplet> feet;
        for (const auto& s : options.feet) feet.push_back(SensorTriplet::from_frame(f, s));
        out.codes.push_back(code_for("feet", options.feet, options.feet_clusters, feet));
        for (const auto& t : feet) {
            parts.push_back(l1g2::encode_subsystem(out.codes.back(), t));
            labels.push_back(t.sensor());
        }
    }
    for (const auto& s : options.body) {
        const std::vector<SensorTriplet> one{SensorTriplet::from_frame(f, s)};
        out.codes.push_back(code_for(s, {s}, options.body_clusters, one));
        parts.push_back(l1g2::encode_subsystem(out.codes.back(), one.front()));
        labels.push_back(s);
    }
    out.seq = l1g2::couple(parts, labels);
    out.stats = landmark::run_statistics(out.seq);
    out.partition = landmark::partition_cycles(out.seq, landmark::select_landmark(out.stats, options.min_runs, options.recurrence_weight));
    out.code_book_id = combined_code_book_id(out.codes);
    return out;
}

std::string cycles_report(const CycleResult& r) {
    const auto& p = r.partition;
    const double ms = r.sample_rate_hz > 0.0 ? 1000.0 / r.sample_rate_hz : 0.0;
    std::string out;
    out += fmt::format("samples {}\n", r.seq.length());
    out += fmt::format("rings {}\n", join(r.seq.labels(), " "));
    out += fmt::format("code_book {}\n", r.code_book_id);
    out += fmt::format("distinct_states {}\n", r.stats.states.size());
    out += fmt::format("landmark {}\n", l1g2::state_label(p.landmark));
    out += fmt::format("cycles {}\n", p.cycles.size());
    out += fmt::format("period_mean {:.4f} samples {:.2f} ms\n", p.period_mean, p.period_mean * ms);
    out += fmt::format("period_sd {:.4f} samples {:.2f} ms\n", p.period_sd, p.period_sd * ms);
    out += fmt::format("head {}\ntail {}\n", p.head, p.tail);
    return out;
}

}  // namespace gaitdyn::pipeline
