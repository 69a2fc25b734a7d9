#pragma once

#include <optional>
#include <vector>

#include "quasibasis/errors.hpp"
#include "quasibasis/geometry.hpp"
#include "quasibasis/quasicrystal.hpp"

namespace quasibasis {

// Window lengths N (in blocks) probed for the averaged deviation condition.
// N = 1 is the Kadec case.
inline const std::vector<long long> kDefaultDeviationGrid{1, 10, 100, 1000, 10000};

// Minimum number of windows a deviation sup must range over.
inline constexpr long long kMinWindows = 100;

struct DeviationRow {
    long long N = 0;
    // sup_n |(1/N) sum_{j=kn+1}^{k(n+N)} delta_j - c k|, block-aligned windows.
    double deviation = 0.0;
    // sup over every start of |mean of kN consecutive delta_j - c|, for comparison
    // with the unaligned form of the condition.
    double unaligned_sup = 0.0;
    bool passes = false;
};

struct AvdoninReport {
    int k = 0;
    double gap = 0.0;
    double delta_sup = 0.0;
    double delta_bound = 0.0;
    double c = 0.0;
    double threshold = 0.0;
    std::vector<DeviationRow> deviations;
    // Grid entries that did not fit in the enumeration.
    std::vector<long long> skipped_N;
    std::optional<long long> smallest_passing_N;

    bool condition_a() const { return gap > 0.0; }
    bool condition_b() const { return delta_sup <= delta_bound + 1e-9; }
    bool condition_c() const { return smallest_passing_N.has_value(); }
    bool all_hold() const { return condition_a() && condition_b() && condition_c(); }
};

// Raised by check_conditions; carries the full report. Failing a sufficient
// condition says nothing about whether the system is a Riesz basis.
class AvdoninConditionError : public Error {
public:
    AvdoninConditionError(const std::string& what, AvdoninReport report)
        : Error(what), report_(std::move(report)) {}
    const AvdoninReport& report() const noexcept { return report_; }

private:
    AvdoninReport report_;
};

class ConditionAFailed : public AvdoninConditionError {
public:
    using AvdoninConditionError::AvdoninConditionError;
};

class ConditionBFailed : public AvdoninConditionError {
public:
    using AvdoninConditionError::AvdoninConditionError;
};

class ConditionCNotObserved : public AvdoninConditionError {
public:
    using AvdoninConditionError::AvdoninConditionError;
};

// phi(x) = sum_m <x + m, beta> 1_S(x + m). Throws BoundaryHit.
double phi(const Vec& x, const Region& region, const Vec& beta);

// Largest |sum of delta over block r - (phi(r alpha) - (k + 1)/2)| for |r| <= r_range.
double block_sum_identity_check(const BlockEnumeration& enumeration, const Region& region,
                                const CutProjectParams& params, long long r_range);

// Integral of phi over the torus, i.e. of <x, beta> over the region.
double torus_integral_phi(const Region& region, const Vec& beta);

double constant_c(const Region& region, const Vec& beta, int k);

// Block-aligned deviation statistic for windows of N blocks. Windows within N
// blocks of either end are discarded. Throws EnumerationTooShort when fewer
// than kMinWindows windows remain.
double window_deviation(const BlockEnumeration& enumeration, double c, long long N);

// sup over start positions of |mean of `length` consecutive delta - c|, same
// end margins as window_deviation but in index units.
double unaligned_window_sup(const BlockEnumeration& enumeration, double c, long long length);

// Smallest symmetric block range so every N in the grid fits.
long long required_n_range(const std::vector<long long>& grid);

struct AvdoninInputs {
    double c = 0.0;
    double delta_bound = 0.0;
    std::vector<long long> grid = kDefaultDeviationGrid;
};

// Runs conditions (a), (b), (c). Returns the report when all hold; otherwise
// throws ConditionAFailed, ConditionBFailed or ConditionCNotObserved (in that
// order of precedence) with the report attached.
AvdoninReport check_conditions(const BlockEnumeration& enumeration, const AvdoninInputs& inputs);

// c from constant_c and delta bound R|beta| + 1 from the region.
AvdoninReport check_conditions(const BlockEnumeration& enumeration, const Region& region,
                               const CutProjectParams& params,
                               const std::vector<long long>& grid = kDefaultDeviationGrid);

// Same evaluation without throwing.
AvdoninReport evaluate_conditions(const BlockEnumeration& enumeration, const AvdoninInputs& inputs);

// Kadec's case: sup_j |delta_j - mean delta| < 1/(4k).
bool kadec_check(const BlockEnumeration& enumeration, int k);

}  // namespace quasibasis
