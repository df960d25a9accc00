#include "hmm/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "hmm/errors.hpp"
#include "hmm/rng.hpp"

namespace hmm::dataset {

namespace {

// normalization ranges for the 7 input dimensions (per-field box width)
std::array<double, 7> field_ranges(const Bounds& b) {
    auto poly_max = [](const std::array<std::array<double, 2>, 4>& poly, int k) {
        double m = 0.0;
        for (const auto& p : poly) m = std::max(m, p[k]);
        return m;
    };
    return {poly_max(b.liquid_corners, 0), poly_max(b.liquid_corners, 1),
            b.v_rel_max - b.v_rel_min,     poly_max(b.vapor_corners, 0),
            poly_max(b.vapor_corners, 1),  b.v_vap_max - b.v_vap_min,
            b.v_rel_max - b.v_rel_min};
}

double norm_dist2(const InputSample& a, const InputSample& b, const std::array<double, 7>& rng) {
    double d2 = 0.0;
    for (int k = 0; k < 7; ++k) {
        const double d = (a.v[k] - b.v[k]) / rng[k];
        d2 += d * d;
    }
    return d2;
}

std::array<double, 2> uniform_in_quad(const std::array<std::array<double, 2>, 4>& q, Rng& rng) {
    // split into triangles (0,1,2) and (0,2,3), pick by area
    auto tri_area = [](const std::array<double, 2>& a, const std::array<double, 2>& b,
                       const std::array<double, 2>& c) {
        return 0.5 * std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    };
    const double a1 = tri_area(q[0], q[1], q[2]);
    const double a2 = tri_area(q[0], q[2], q[3]);
    const bool first = rng.uniform01() * (a1 + a2) < a1;
    const auto& A = q[0];
    const auto& B = first ? q[1] : q[2];
    const auto& C = first ? q[2] : q[3];
    const double r1 = std::sqrt(rng.uniform01());
    const double r2 = rng.uniform01();
    const double w0 = 1.0 - r1, w1 = r1 * (1.0 - r2), w2 = r1 * r2;
    return {w0 * A[0] + w1 * B[0] + w2 * C[0], w0 * A[1] + w1 * B[1] + w2 * C[1]};
}

InputSample draw_uniform(const Bounds& b, Rng& rng) {
    InputSample s;
    const auto liq = uniform_in_quad(b.liquid_corners, rng);
    const auto vap = uniform_in_quad(b.vapor_corners, rng);
    s.v[0] = liq[0];
    s.v[1] = liq[1];
    s.v[2] = rng.uniform(b.v_rel_min, b.v_rel_max);
    s.v[3] = vap[0];
    s.v[4] = vap[1];
    s.v[5] = rng.uniform(b.v_vap_min, b.v_vap_max);
    s.v[6] = rng.uniform(b.v_rel_min, b.v_rel_max);
    return s;
}

}  // namespace

Bounds table4_bounds() {
    Bounds b;
    b.liquid_corners = {{{1024.214739, 0.0},
                         {1616.252845, 0.0},
                         {0.0, 509.380478},
                         {0.0, 343.403446}}};
    b.vapor_corners = {{{1.0, 0.0}, {162.996622, 0.0}, {0.0, 30.960615}, {0.0, 1.0}}};
    return b;
}

bool inside_hull(const std::array<std::array<double, 2>, 4>& poly, double x, double y) {
    // convex CCW polygon: inside iff left of (or on) every edge, with a
    // small relative slack so corner points themselves pass
    for (int i = 0; i < 4; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % 4];
        const double cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
        const double scale = std::abs(b[0] - a[0]) + std::abs(b[1] - a[1]) + std::abs(x) +
                             std::abs(y) + 1.0;
        if (cross < -1e-9 * scale) return false;
    }
    return true;
}

bool sample_in_bounds(const Bounds& b, const InputSample& s) {
    return inside_hull(b.liquid_corners, s.v[0], s.v[1]) &&
           inside_hull(b.vapor_corners, s.v[3], s.v[4]) && s.v[2] >= b.v_rel_min &&
           s.v[2] <= b.v_rel_max && s.v[6] >= b.v_rel_min && s.v[6] <= b.v_rel_max &&
           s.v[5] >= b.v_vap_min && s.v[5] <= b.v_vap_max;
}

std::vector<InputSample> sample_inputs(std::size_t n, const Bounds& bounds, std::uint64_t seed,
                                       int pool) {
    if (n < 1) throw ParameterError("dataset: sample count must be >= 1");
    if (pool < 1) throw ParameterError("dataset: candidate pool must be >= 1");
    if (!(bounds.v_rel_min < bounds.v_rel_max) || !(bounds.v_vap_min < bounds.v_vap_max)) {
        throw ParameterError("dataset: velocity bounds are empty");
    }
    const auto ranges = field_ranges(bounds);
    Rng rng(seed);
    std::vector<InputSample> accepted;
    accepted.reserve(n);
    accepted.push_back(draw_uniform(bounds, rng));
    while (accepted.size() < n) {
        InputSample best{};
        double best_score = -1.0;
        for (int c = 0; c < pool; ++c) {
            const InputSample cand = draw_uniform(bounds, rng);
            double score = std::numeric_limits<double>::infinity();
            for (const auto& a : accepted) {
                score = std::min(score, norm_dist2(cand, a, ranges));
                if (score <= best_score) break;
            }
            if (score > best_score) {
                best_score = score;
                best = cand;
            }
        }
        accepted.push_back(best);
    }
    return accepted;
}

DataRecord generate_record(const InputSample& sample, const std::array<std::uint64_t, 3>& seeds,
                           const MicroFn& micro) {
    DataRecord rec;
    rec.input = sample;
    rec.seeds = seeds;
    rec.spread_min.fill(std::numeric_limits<double>::infinity());
    rec.spread_max.fill(-std::numeric_limits<double>::infinity());
    std::array<std::array<double, 9>, 3> runs{};
    for (int t = 0; t < 3; ++t) {
        try {
            runs[t] = micro(sample, seeds[t]);
        } catch (const Error& e) {
            rec.failed = true;
            rec.failure = e.what();
            rec.output.fill(0.0);
            rec.spread_min.fill(0.0);
            rec.spread_max.fill(0.0);
            return rec;
        }
    }
    for (int k = 0; k < 9; ++k) {
        double sum = 0.0;
        for (int t = 0; t < 3; ++t) {
            sum += runs[t][k];
            rec.spread_min[k] = std::min(rec.spread_min[k], runs[t][k]);
            rec.spread_max[k] = std::max(rec.spread_max[k], runs[t][k]);
        }
        rec.output[k] = sum / 3.0;
    }
    return rec;
}

std::vector<DataRecord> generate_records(const std::vector<InputSample>& samples,
                                         const MicroFn& micro, std::uint64_t seed, int jobs) {
    std::vector<DataRecord> records(samples.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= samples.size()) return;
            const std::array<std::uint64_t, 3> seeds = {split_seed(seed, 3 * i),
                                                        split_seed(seed, 3 * i + 1),
                                                        split_seed(seed, 3 * i + 2)};
            records[i] = generate_record(samples[i], seeds, micro);
        }
    };
    const int n_threads = std::max(1, jobs);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

namespace {

const char* kColumns =
    "idx,status,seed0,seed1,seed2,"
    "rho0_liq,rho1_liq,vrel_liq,rho0_vap,rho1_vap,v_vap,vrel_vap,"
    "o_rho0_liq,o_rho1_liq,o_m0_liq,o_m1_liq,o_rho0_vap,o_rho1_vap,o_m0_vap,o_m1_vap,o_s,"
    "min_rho0_liq,min_rho1_liq,min_m0_liq,min_m1_liq,min_rho0_vap,min_rho1_vap,min_m0_vap,"
    "min_m1_vap,min_s,"
    "max_rho0_liq,max_rho1_liq,max_m0_liq,max_m1_liq,max_rho0_vap,max_rho1_vap,max_m0_vap,"
    "max_m1_vap,max_s";
constexpr int kFieldCount = 39;

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<DataRecord>& records,
                   const std::string& config_hash) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("dataset: cannot open " + path + " for writing");
    std::fprintf(f, "# hmm-dataset v1; units=SI; config=%s\n", config_hash.c_str());
    std::fprintf(f, "# %s\n", kColumns);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DataRecord& r = records[i];
        std::fprintf(f, "%zu,%s,%llu,%llu,%llu", i,
                     r.failed ? ("failed:" + sanitize(r.failure)).c_str() : "ok",
                     static_cast<unsigned long long>(r.seeds[0]),
                     static_cast<unsigned long long>(r.seeds[1]),
                     static_cast<unsigned long long>(r.seeds[2]));
        for (double v : r.input.v) std::fprintf(f, ",%.17g", v);
        for (double v : r.output) std::fprintf(f, ",%.17g", v);
        for (double v : r.spread_min) std::fprintf(f, ",%.17g", v);
        for (double v : r.spread_max) std::fprintf(f, ",%.17g", v);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

std::vector<DataRecord> read_dataset(const std::string& path, std::string* config_hash) {
    std::ifstream in(path);
    if (!in) throw ParseError("dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# hmm-dataset v1", 0) != 0) {
        throw ParseError("dataset: " + path + " lacks the hmm-dataset v1 header");
    }
    if (config_hash != nullptr) {
        const auto pos = line.find("config=");
        *config_hash = pos == std::string::npos ? "" : line.substr(pos + 7);
    }
    std::vector<DataRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() != kFieldCount) {
            throw ParseError("dataset: line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(kFieldCount));
        }
        auto num = [&](int col) {
            const std::string& s = fields[col];
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0') {
                throw ParseError("dataset: line " + std::to_string(line_no) + " column " +
                                 std::to_string(col + 1) + ": not a number: '" + s + "'");
            }
            return v;
        };
        auto seed = [&](int col) {
            const std::string& s = fields[col];
            char* end = nullptr;
            const auto v = std::strtoull(s.c_str(), &end, 10);
            if (end == s.c_str() || *end != '\0') {
                throw ParseError("dataset: line " + std::to_string(line_no) + " column " +
                                 std::to_string(col + 1) + ": not a seed: '" + s + "'");
            }
            return static_cast<std::uint64_t>(v);
        };
        DataRecord r;
        if (fields[1] == "ok") {
            r.failed = false;
        } else if (fields[1].rfind("failed:", 0) == 0) {
            r.failed = true;
            r.failure = fields[1].substr(7);
        } else {
            throw ParseError("dataset: line " + std::to_string(line_no) +
                             " column 2: bad status '" + fields[1] + "'");
        }
        r.seeds = {seed(2), seed(3), seed(4)};
        int col = 5;
        for (int k = 0; k < 7; ++k) r.input.v[k] = num(col++);
        for (int k = 0; k < 9; ++k) r.output[k] = num(col++);
        for (int k = 0; k < 9; ++k) r.spread_min[k] = num(col++);
        for (int k = 0; k < 9; ++k) r.spread_max[k] = num(col++);
        records.push_back(std::move(r));
    }
    return records;
}

void validate_records(const std::vector<DataRecord>& records, const Bounds& bounds) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!sample_in_bounds(bounds, records[i].input)) {
            throw ParameterError("dataset: record " + std::to_string(i) +
                                 " lies outside the input bounding domain");
        }
    }
}

}  // namespace hmm::dataset
