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

#include "gaitdyn/passtensor.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/symbolic.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaitdyn::passtensor {

std::size_t bin_sample(std::size_t b, std::size_t length, std::size_t bins) { return (2 * b + 1) * length / (2 * bins); }

CodeGrid normalize_cycle(const l1g2::CoupledStateSequence& seq, const landmark::Cycle& cycle, std::size_t bins) {
    if (bins < kMinBins) throw ConfigError(fmt::format("need at least {} angular bins, got {}", kMinBins, bins));
    if (cycle.end <= cycle.start) throw PreconditionError(fmt::format("empty cycle [{}, {})", cycle.start, cycle.end));
    if (cycle.end > seq.length()) {
        throw PreconditionError(fmt::format("cycle [{}, {}) runs past the sequence end {}", cycle.start, cycle.end, seq.length()));
    }
    CodeGrid g{seq.arity(), bins, std::vector<std::uint32_t>(seq.arity() * bins)};
    for (std::size_t b = 0; b < bins; ++b) {
        const auto s = seq.state(cycle.start + bin_sample(b, cycle.length(), bins));
        for (std::size_t r = 0; r < g.rings; ++r) g.codes[r * bins + b] = s[r];
    }
    return g;
}

CodeGrid Passtensor::grid(std::size_t c) const {
    const auto n = rings * bins;
    return {rings, bins, {tensor.begin() + static_cast<std::ptrdiff_t>(c * n), tensor.begin() + static_cast<std::ptrdiff_t>((c + 1) * n)}};
}

Passtensor build_passtensor(const l1g2::CoupledStateSequence& seq, const landmark::CyclePartition& partition, std::size_t bins,
                            std::optional<CycleRange> range, const std::string& code_book_id) {
    if (bins < kMinBins) throw ConfigError(fmt::format("need at least {} angular bins, got {}", kMinBins, bins));
    if (partition.landmark.size() != seq.arity()) throw PreconditionError("partition and sequence disagree on the tuple arity");
    std::size_t first = 1, last = partition.cycles.size();
    if (range) {
        if (range->first < 1 || range->first > range->last) {
            throw ConfigError(fmt::format("bad cycle range {}..{}", range->first, range->last));
        }
        first = range->first;
        last = std::min(range->last, last);
    }
    if (partition.cycles.empty() || first > last) {
        throw PreconditionError(fmt::format("no cycles selected ({} available)", partition.cycles.size()));
    }

    Passtensor pt;
    pt.cycles = last - first + 1;
    pt.rings = seq.arity();
    pt.bins = bins;
    pt.ring_labels = seq.labels();
    pt.ring_alphabets = seq.alphabets();
    pt.first_cycle = first;
    pt.landmark_state = partition.landmark;
    pt.code_book_id = code_book_id;
    pt.tensor.reserve(pt.cycles * pt.rings * bins);
    for (std::size_t k = first; k <= last; ++k) {
        const auto& c = partition.cycles[k - 1];
        const auto g = normalize_cycle(seq, c, bins);
        pt.tensor.insert(pt.tensor.end(), g.codes.begin(), g.codes.end());
        pt.raw_lengths.push_back(c.length());
        pt.cycle_starts.push_back(c.start);
    }
    return pt;
}

namespace {

// Code counts of one (ring, bin) cell over the cycles.
std::vector<std::size_t> cell_histogram(const Passtensor& pt, std::size_t r, std::size_t b, std::size_t alphabet) {
    std::vector<std::size_t> h(alphabet, 0);
    for (std::size_t c = 0; c < pt.cycles; ++c) ++h[pt.at(c, r, b)];
    return h;
}

std::uint32_t mode(const std::vector<std::size_t>& h) {
    return static_cast<std::uint32_t>(std::max_element(h.begin(), h.end()) - h.begin());  // first maximum
}

std::uint32_t ring_alphabet(const Passtensor& pt, std::size_t r) {
    std::uint32_t a = r < pt.ring_alphabets.size() ? pt.ring_alphabets[r] : 0;
    for (std::size_t c = 0; c < pt.cycles; ++c)
        for (std::size_t b = 0; b < pt.bins; ++b) a = std::max(a, pt.at(c, r, b) + 1);
    return a;
}

}  // namespace

CodeGrid skeleton(const Passtensor& pt) {
    CodeGrid g{pt.rings, pt.bins, std::vector<std::uint32_t>(pt.rings * pt.bins)};
    for (std::size_t r = 0; r < pt.rings; ++r) {
        const auto alphabet = ring_alphabet(pt, r);
        for (std::size_t b = 0; b < pt.bins; ++b) g.codes[r * pt.bins + b] = mode(cell_histogram(pt, r, b, alphabet));
    }
    return g;
}

PasstensorDiff compare_passtensors(const Passtensor& a, const Passtensor& b, const CompareWeights& weights) {
    if (a.code_book_id != b.code_book_id) {
        throw PreconditionError(fmt::format("passtensors come from different code books ({} vs {})", a.code_book_id, b.code_book_id));
    }
    if (a.ring_labels != b.ring_labels) throw PreconditionError("passtensors have different rings");
    if (a.bins != b.bins) throw PreconditionError(fmt::format("passtensors have {} and {} bins", a.bins, b.bins));
    if (a.cycles == 0 || b.cycles == 0) throw PreconditionError("empty passtensor");
    if (!(weights.skeleton >= 0.0 && weights.stochastic >= 0.0 && weights.skeleton + weights.stochastic > 0.0)) {
        throw ConfigError("comparison weights must be nonnegative with a positive sum");
    }

    const auto sa = skeleton(a), sb = skeleton(b);
    PasstensorDiff d;
    std::size_t agree = 0;
    double tv_sum = 0.0;
    for (std::size_t r = 0; r < a.rings; ++r) {
        const auto alphabet = std::max(ring_alphabet(a, r), ring_alphabet(b, r));
        std::size_t ring_agree = 0;
        for (std::size_t k = 0; k < a.bins; ++k) {
            const auto ca = sa.at(r, k), cb = sb.at(r, k);
            if (ca == cb) ++ring_agree;
            else d.mismatches.push_back({r, k, ca, cb});
            const auto ha = cell_histogram(a, r, k, alphabet), hb = cell_histogram(b, r, k, alphabet);
            double tv = 0.0;
            for (std::size_t i = 0; i < alphabet; ++i) {
                tv += std::abs(static_cast<double>(ha[i]) / static_cast<double>(a.cycles) -
                               static_cast<double>(hb[i]) / static_cast<double>(b.cycles));
            }
            tv_sum += 0.5 * tv;
        }
        agree += ring_agree;
        d.ring_agreement.push_back(static_cast<double>(ring_agree) / static_cast<double>(a.bins));
    }
    const double cells = static_cast<double>(a.rings * a.bins);
    d.skeleton_agreement = static_cast<double>(agree) / cells;
    d.stochastic_agreement = 1.0 - tv_sum / cells;

    const auto profile = [&](const Passtensor& pt, const CodeGrid& sk) {
        std::vector<double> out;
        for (std::size_t c = 0; c < pt.cycles; ++c) {
            std::size_t same = 0;
            for (std::size_t r = 0; r < pt.rings; ++r)
                for (std::size_t k = 0; k < pt.bins; ++k) same += pt.at(c, r, k) == sk.at(r, k);
            out.push_back(static_cast<double>(same) / cells);
        }
        return out;
    };
    d.cycle_profile_a = profile(a, sb);
    d.cycle_profile_b = profile(b, sa);

    const double ws = weights.skeleton / (weights.skeleton + weights.stochastic);
    // summing the disagreements keeps identical inputs at exactly 0
    d.distance = std::clamp(ws * (static_cast<double>(d.mismatches.size()) / cells) + (1.0 - ws) * (tv_sum / cells), 0.0, 1.0);
    return d;
}

double calibrate_threshold(std::vector<double> genuine_distances, double level) {
    if (genuine_distances.empty()) throw PreconditionError("no genuine distances to calibrate on");
    if (!(level > 0.0 && level <= 1.0)) throw ConfigError(fmt::format("calibration level {} outside (0, 1]", level));
    return symbolic::empirical_quantile(std::move(genuine_distances), level);
}

namespace {
constexpr const char* kMagic = "gaitdyn-passtensor";
constexpr int kVersion = 1;
}  // namespace

std::string serialize(const Passtensor& pt) {
    std::string out = fmt::format("{} {}\nshape {} {} {}\nrings", kMagic, kVersion, pt.cycles, pt.rings, pt.bins);
    for (const auto& l : pt.ring_labels) out += ' ' + l;
    out += "\nalphabets";
    for (auto a : pt.ring_alphabets) out += fmt::format(" {}", a);
    out += fmt::format("\ncode_book {}\nlandmark {}\nfirst_cycle {}\ngrid\n", pt.code_book_id.empty() ? "-" : pt.code_book_id,
                       l1g2::state_label(pt.landmark_state), pt.first_cycle);
    for (std::size_t c = 0; c < pt.cycles; ++c) {
        for (std::size_t r = 0; r < pt.rings; ++r) {
            for (std::size_t b = 0; b < pt.bins; ++b) {
                if (b) out += ' ';
                out += std::to_string(pt.at(c, r, b));
            }
            out += '\n';
        }
    }
    out += "raw_lengths";
    for (auto l : pt.raw_lengths) out += fmt::format(" {}", l);
    out += "\ncycle_starts";
    for (auto s : pt.cycle_starts) out += fmt::format(" {}", s);
    out += "\nend\n";
    return out;
}

Passtensor deserialize_passtensor(const std::string& text, const std::string& source) {
    LineReader in(text, source);
    const auto magic = in.next_fields();
    if (magic.size() != 2 || magic[0] != kMagic) in.fail("not a passtensor file");
    if (to_int(magic[1], in) != kVersion) in.fail(fmt::format("unsupported passtensor version {}", magic[1]));
    const auto count = [&](const std::string& f) {
        const auto v = to_int(f, in);
        if (v < 0) in.fail(fmt::format("negative count {}", f));
        return static_cast<std::size_t>(v);
    };

    Passtensor pt;
    const auto shape = in.expect("shape");
    if (shape.size() != 3) in.fail("'shape' takes cycles rings bins");
    pt.cycles = count(shape[0]);
    pt.rings = count(shape[1]);
    pt.bins = count(shape[2]);
    if (pt.cycles < 1 || pt.rings < 1 || pt.bins < kMinBins) in.fail("degenerate shape");
    pt.ring_labels = in.expect("rings");
    if (pt.ring_labels.size() != pt.rings) in.fail("ring label count differs from the shape");
    for (const auto& f : in.expect("alphabets")) pt.ring_alphabets.push_back(static_cast<std::uint32_t>(count(f)));
    if (pt.ring_alphabets.size() != pt.rings) in.fail("alphabet count differs from the shape");
    const auto cb = in.expect("code_book");
    if (cb.size() != 1) in.fail("'code_book' takes one id");
    pt.code_book_id = cb[0] == "-" ? "" : cb[0];
    const auto lm = in.expect("landmark");
    if (lm.size() != 1) in.fail("'landmark' takes one state");
    try {
        pt.landmark_state = l1g2::parse_state_label(lm[0]);
    } catch (const ConfigError&) {
        in.fail(fmt::format("bad landmark '{}'", lm[0]));
    }
    const auto fc = in.expect("first_cycle");
    if (fc.size() != 1) in.fail("'first_cycle' takes one number");
    pt.first_cycle = count(fc[0]);
    if (!in.expect("grid").empty()) in.fail("'grid' takes no values");
    pt.tensor.reserve(pt.cycles * pt.rings * pt.bins);
    for (std::size_t c = 0; c < pt.cycles; ++c) {
        for (std::size_t r = 0; r < pt.rings; ++r) {
            const auto row = in.next_fields();
            if (row.size() != pt.bins) in.fail(fmt::format("grid row has {} codes, expected {}", row.size(), pt.bins));
            for (const auto& f : row) {
                const auto v = count(f);
                if (v >= pt.ring_alphabets[r]) in.fail(fmt::format("code {} outside ring {}'s alphabet", v, pt.ring_labels[r]));
                pt.tensor.push_back(static_cast<std::uint32_t>(v));
            }
        }
    }
    for (const auto& f : in.expect("raw_lengths")) pt.raw_lengths.push_back(count(f));
    for (const auto& f : in.expect("cycle_starts")) pt.cycle_starts.push_back(count(f));
    if (pt.raw_lengths.size() != pt.cycles || pt.cycle_starts.size() != pt.cycles) in.fail("per-cycle lists differ from the shape");
    if (in.next_fields() != std::vector<std::string>{"end"}) in.fail("missing 'end'");
    return pt;
}

std::string diff_report(const PasstensorDiff& d, const Passtensor& a, const Passtensor& b) {
    std::string out = fmt::format("distance {:.6f}\nskeleton_agreement {:.6f}\nstochastic_agreement {:.6f}\n", d.distance,
                                  d.skeleton_agreement, d.stochastic_agreement);
    out += fmt::format("cycles_a {}\ncycles_b {}\nbins {}\n", a.cycles, b.cycles, a.bins);
    for (std::size_t r = 0; r < d.ring_agreement.size(); ++r) {
        out += fmt::format("ring {} agreement {:.6f}\n", a.ring_labels[r], d.ring_agreement[r]);
    }
    out += fmt::format("skeleton_mismatches {}\n", d.mismatches.size());
    for (const auto& m : d.mismatches) {
        out += fmt::format("mismatch ring={} bin={} a={} b={}\n", a.ring_labels[m.ring], m.bin, m.code_a, m.code_b);
    }
    const auto profile = [&](const char* name, const std::vector<double>& p, std::size_t first) {
        for (std::size_t c = 0; c < p.size(); ++c) out += fmt::format("profile_{} cycle={} agreement={:.6f}\n", name, first + c, p[c]);
    };
    profile("a", d.cycle_profile_a, a.first_cycle);
    profile("b", d.cycle_profile_b, b.first_cycle);
    return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

// Angle of the start of bin b: nine o'clock, then clockwise on screen (y down).
double bin_angle(double b, std::size_t bins) { return kPi + 2.0 * kPi * b / static_cast<double>(bins); }

std::string sector(double cx, double cy, double r_in, double r_out, double a0, double a1) {
    const auto px = [&](double r, double a) { return svg::num(cx + r * std::cos(a)); };
    const auto py = [&](double r, double a) { return svg::num(cy + r * std::sin(a)); };
    const int large = a1 - a0 > kPi ? 1 : 0;
    return fmt::format("M{},{} A{},{} 0 {} 1 {},{} L{},{} A{},{} 0 {} 0 {},{} Z", px(r_out, a0), py(r_out, a0), svg::num(r_out),
                       svg::num(r_out), large, px(r_out, a1), py(r_out, a1), px(r_in, a1), py(r_in, a1), svg::num(r_in),
                       svg::num(r_in), large, px(r_in, a0), py(r_in, a0));
}

}  // namespace

std::string render_rings(const CodeGrid& grid, const svg::Palette& palette, const std::vector<std::string>& labels,
                         const std::string& title) {
    if (grid.rings == 0 || grid.bins == 0) throw PreconditionError("empty code grid");
    svg::require_palette(palette, grid.codes);
    const double ring_w = 36.0, hole = 40.0;
    const double outer = hole + ring_w * static_cast<double>(grid.rings);
    const double cx = outer + 60.0, cy = outer + 40.0;
    svg::Writer w(2.0 * cx, 2.0 * cy);
    if (!title.empty()) w.text(10.0, 18.0, title, 12.0);
    for (std::size_t r = 0; r < grid.rings; ++r) {
        const double r_out = outer - ring_w * static_cast<double>(r);
        const double r_in = r_out - ring_w;
        w.open_group(fmt::format("data-ring=\"{}\"", r < labels.size() ? svg::escape(labels[r]) : std::to_string(r)));
        for (std::size_t b = 0; b < grid.bins;) {
            std::size_t e = b + 1;
            while (e < grid.bins && grid.at(r, e) == grid.at(r, b)) ++e;
            w.path(sector(cx, cy, r_in, r_out, bin_angle(static_cast<double>(b), grid.bins), bin_angle(static_cast<double>(e), grid.bins)),
                   palette[grid.at(r, b)]);
            b = e;
        }
        w.close_group();
        if (r < labels.size()) w.text(cx + 4.0, cy - r_out + ring_w * 0.6, labels[r], 10.0);
    }
    // landmark marker at phase 0
    w.line(cx - outer - 14.0, cy, cx - hole + 4.0, cy, "#000000", 2.0);
    return w.finish();
}

CylinderView parse_view(const std::string& name) {
    if (name == "unrolled") return CylinderView::Unrolled;
    if (name == "isometric") return CylinderView::Isometric;
    throw ConfigError(fmt::format("unknown cylinder view '{}' (unrolled or isometric)", name));
}

std::string render_cylinder(const Passtensor& pt, const svg::Palette& palette, CylinderView view, const std::string& title) {
    if (pt.cycles == 0 || pt.rings == 0 || pt.bins == 0) throw PreconditionError("empty passtensor");
    svg::require_palette(palette, pt.tensor);
    const double head = title.empty() ? 10.0 : 30.0;

    if (view == CylinderView::Unrolled) {
        const double cw = std::clamp(900.0 / static_cast<double>(pt.bins), 2.0, 12.0);
        const double ch = std::clamp(400.0 / static_cast<double>(pt.cycles), 2.0, 12.0);
        const double left = 70.0, gap = 24.0;
        const double panel = ch * static_cast<double>(pt.cycles);
        svg::Writer w(left + cw * static_cast<double>(pt.bins) + 20.0, head + static_cast<double>(pt.rings) * (panel + gap));
        if (!title.empty()) w.text(10.0, 18.0, title, 12.0);
        for (std::size_t r = 0; r < pt.rings; ++r) {
            const double y0 = head + static_cast<double>(r) * (panel + gap);
            w.text(left - 6.0, y0 + 10.0, pt.ring_labels[r], 10.0, "end");
            w.open_group(fmt::format("data-ring=\"{}\"", svg::escape(pt.ring_labels[r])));
            for (std::size_t c = 0; c < pt.cycles; ++c) {
                for (std::size_t b = 0; b < pt.bins;) {
                    std::size_t e = b + 1;
                    while (e < pt.bins && pt.at(c, r, e) == pt.at(c, r, b)) ++e;
                    w.rect(left + cw * static_cast<double>(b), y0 + ch * static_cast<double>(c), cw * static_cast<double>(e - b), ch,
                           palette[pt.at(c, r, b)]);
                    b = e;
                }
            }
            w.close_group();
        }
        return w.finish();
    }

    // Isometric: each cycle is a stack of flattened rings; cycle 1 on top.
    const double ring_w = 30.0, hole = 30.0, squash = 0.35;
    const double dz = std::clamp(300.0 / static_cast<double>(pt.cycles), 1.5, 12.0);
    const double outer = hole + ring_w * static_cast<double>(pt.rings);
    const double cx = outer + 40.0, cy = head + outer * squash + 10.0;
    svg::Writer w(2.0 * cx, cy + outer * squash + dz * static_cast<double>(pt.cycles) + 20.0);
    if (!title.empty()) w.text(10.0, 18.0, title, 12.0);
    for (std::size_t k = pt.cycles; k-- > 0;) {
        const double yc = cy + dz * static_cast<double>(k);
        w.open_group(fmt::format("data-cycle=\"{}\"", pt.first_cycle + k));
        for (std::size_t r = 0; r < pt.rings; ++r) {
            const double r_out = outer - ring_w * static_cast<double>(r);
            const double r_in = r_out - ring_w;
            for (std::size_t b = 0; b < pt.bins; ++b) {
                const double a0 = bin_angle(static_cast<double>(b), pt.bins), a1 = bin_angle(static_cast<double>(b + 1), pt.bins);
                const double xy[] = {cx + r_out * std::cos(a0), yc + squash * r_out * std::sin(a0),
                                     cx + r_out * std::cos(a1), yc + squash * r_out * std::sin(a1),
                                     cx + r_in * std::cos(a1),  yc + squash * r_in * std::sin(a1),
                                     cx + r_in * std::cos(a0),  yc + squash * r_in * std::sin(a0)};
                w.polygon(xy, palette[pt.at(k, r, b)]);
            }
        }
        w.close_group();
    }
    w.line(cx - outer - 12.0, cy, cx - outer, cy, "#000000", 2.0);
    return w.finish();
}

}  // namespace gaitdyn::passtensor
