#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hmm::dataset {

/// 7-dimensional surrogate input, SI units:
/// (rho0_liq, rho1_liq, vrel_liq, rho0_vap, rho1_vap, v_vap, vrel_vap).
struct InputSample {
    std::array<double, 7> v{};
};

/// Input bounding domain B_in: the density pairs of each side live in the
/// convex hull of their four corner points, the velocities in boxes.
struct Bounds {
    std::array<std::array<double, 2>, 4> liquid_corners;  // (rho0, rho1), convex CCW
    std::array<std::array<double, 2>, 4> vapor_corners;
    double v_vap_min = -750.0, v_vap_max = 750.0;   // m/s
    double v_rel_min = -500.0, v_rel_max = 500.0;
};

/// Argon-methane corner table.
Bounds table4_bounds();

bool inside_hull(const std::array<std::array<double, 2>, 4>& poly, double x, double y);
bool sample_in_bounds(const Bounds& bounds, const InputSample& sample);

/// Greedy farthest-point sampling in the box-normalized 7-cube: candidates
/// are uniform in B_in and each accepted point maximizes the minimum
/// distance to the accepted set over a pool of `pool` candidates.
std::vector<InputSample> sample_inputs(std::size_t n, const Bounds& bounds, std::uint64_t seed,
                                       int pool = 64);

struct DataRecord {
    InputSample input;
    std::array<double, 9> output{};      // triplet mean, Eq.-(22) field order
    std::array<double, 9> spread_min{};  // per-field min over the triplet
    std::array<double, 9> spread_max{};
    std::array<std::uint64_t, 3> seeds{};
    bool failed = false;
    std::string failure;  // cause, recorded for audit
};

using MicroFn = std::function<std::array<double, 9>(const InputSample&, std::uint64_t seed)>;

/// Runs the micro solver on three seeds and averages; a thrown hmm::Error
/// marks the record failed with its cause instead of propagating.
DataRecord generate_record(const InputSample& sample, const std::array<std::uint64_t, 3>& seeds,
                           const MicroFn& micro);

/// Parallel record generation (jobs threads); per-record seeds are forked
/// deterministically from `seed` by record index, so the result does not
/// depend on the thread count.
std::vector<DataRecord> generate_records(const std::vector<InputSample>& samples,
                                         const MicroFn& micro, std::uint64_t seed, int jobs = 1);

/// Comma-separated text with header `# hmm-dataset v1; units=SI; config=<hash>`.
void write_dataset(const std::string& path, const std::vector<DataRecord>& records,
                   const std::string& config_hash);
std::vector<DataRecord> read_dataset(const std::string& path,
                                     std::string* config_hash = nullptr);

/// Re-check of the B_in invariants on loaded records; throws ParameterError
/// naming the first violating record.
void validate_records(const std::vector<DataRecord>& records, const Bounds& bounds);

}  // namespace hmm::dataset
