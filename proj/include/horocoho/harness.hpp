#pragma once

#include "horocoho/families.hpp"
#include "horocoho/records.hpp"
#include "horocoho/sharpness.hpp"

namespace horocoho {

// ---------------------------------------------------------------------------
// Configuration (flat key=value text, repeated keys form lists)
// ---------------------------------------------------------------------------

struct ScanConfig {
    std::string experiment; // verify | scan-upper | scan-tame | scan-lower |
                            // scan-map | cocycle | convergence
    bool grid_set = false;
    Domain domain = Domain::FullLine;
    double umin = -9.0, umax = 9.0;
    int n = 4097;
    std::vector<double> nu, lambda, L, s, sigma;
    double epsilon = 0.5;
    double tol_residual = 1e-8;
    double tol_slope = 0.15;
    std::string out;
    int threads = 0;
};

/// Parse errors carry the line number and field name.
ScanConfig parse_config(const std::string& text);
ScanConfig load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Experiment engines
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool less_is_pass = true; // pass iff measured <= threshold (measured >= otherwise)
    bool pass = false;
};

struct RunResult {
    std::vector<ExperimentRecord> records;
    std::vector<CheckRow> checks;
};

CheckRow check_le(const std::string& name, double measured, double threshold);
CheckRow check_ge(const std::string& name, double measured, double threshold);

/// Cross-module property suite on small default grids.
RunResult exp_verify(const ScanConfig& cfg);
/// Map upper bound (Theorems on f o h_{-L/2}) over the L-scan, FullUXV and
/// XVOnly variants.
RunResult exp_scan_upper(const ScanConfig& cfg);
/// Twisted solver: residuals, V-commutation, and the two lambda-uniformity
/// ratios (tame XV-part and full norm).
RunResult exp_scan_tame(const ScanConfig& cfg);
/// Sharpness nu-scan with fitted exponents.
RunResult exp_scan_lower(const ScanConfig& cfg);
/// Map solver round trips over the L-scan.
RunResult exp_scan_map(const ScanConfig& cfg);
/// Two-parameter cocycle: round trip, defect, tame ratio scan, elliptic
/// regularity ratios.
RunResult exp_cocycle(const ScanConfig& cfg);
/// Convergence orders: commutator defects (O(h^4)), quadrature (O(h^2)),
/// and the exact-cancellation floor case.
RunResult exp_convergence(const ScanConfig& cfg);

/// Dispatch + CSV emission + stdout summary. Returns the process exit code
/// (0 iff every check passed).
int run(const ScanConfig& cfg);

} // namespace horocoho
