#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "viewplan/basis.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/sensor.hpp"

namespace viewplan {

struct Dataset {
    struct Sample {
        Vec3 position{0.0, 0.0, 0.0};
        double confidence = 0.0;
    };
    std::vector<Sample> samples;
    std::string source;
    std::size_t skipped_undetected = 0;
};

/// Loads a confidence CSV for fitting. Rows flagged detected=0 carry no field
/// information and are excluded.
inline Dataset load_dataset(const std::string& path) {
    Dataset ds;
    ds.source = path;
    for (const ConfidenceRecord& r : load_confidence_csv(path)) {
        if (!r.detected) {
            ++ds.skipped_undetected;
            continue;
        }
        ds.samples.push_back({r.position, r.value});
    }
    if (ds.samples.empty()) throw InsufficientRowsError("dataset '" + path + "' has no usable rows");
    return ds;
}

struct FitReport {
    ThetaVector theta;
    double mean_error = 0.0;   // mean absolute residual
    BasisKind basis = BasisKind::Reduced6;
    std::vector<double> residuals;
};

/// Least-squares fit of the field coefficients, solved by column-pivoted QR.
inline FitReport fit_least_squares(const Dataset& ds, BasisKind basis) {
    const int d = basis_dim(basis);
    const auto m = static_cast<Eigen::Index>(ds.samples.size());
    if (m < d)
        throw InsufficientRowsError("need at least " + std::to_string(d) + " samples, got " +
                                    std::to_string(m));

    Eigen::MatrixXd X(m, d);
    Eigen::VectorXd y(m);
    double phi[20];
    for (Eigen::Index i = 0; i < m; ++i) {
        eval_basis(basis, ds.samples[static_cast<std::size_t>(i)].position, phi);
        for (int c = 0; c < d; ++c) X(i, c) = phi[c];
        y(i) = ds.samples[static_cast<std::size_t>(i)].confidence;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw RankDeficientError("design matrix is numerically rank-deficient; the sampling "
                                 "grid does not excite every regressor");

    const Eigen::VectorXd theta = X.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = X * theta - y;

    FitReport report;
    report.basis = basis;
    report.theta = ThetaVector(basis, std::vector<double>(theta.data(), theta.data() + d));
    report.residuals.assign(res.data(), res.data() + m);
    report.mean_error = res.cwiseAbs().mean();
    return report;
}

struct PruneResult {
    std::vector<int> kept_indices;       // positions in the 20-term order with |coeff| >= floor
    ThetaVector reduced;                 // the six canonical coefficients, in reduced order
    bool kept_equals_canonical = false;  // true when the kept set is exactly the canonical six
};

/// Reports which 20-term coefficients survive a magnitude floor and extracts
/// the six canonical reduced-basis coefficients. Reported only; nothing is
/// auto-applied.
inline PruneResult prune_basis(const FitReport& report, double magnitude_floor) {
    if (report.basis != BasisKind::Full20)
        throw InvalidDimensionError("pruning applies to a 20-term fit");
    PruneResult out;
    for (int i = 0; i < 20; ++i)
        if (std::abs(report.theta.coeffs[static_cast<std::size_t>(i)]) >= magnitude_floor)
            out.kept_indices.push_back(i);
    std::vector<double> six(6);
    for (int k = 0; k < 6; ++k)
        six[static_cast<std::size_t>(k)] =
            report.theta.coeffs[static_cast<std::size_t>(kReducedInFull[static_cast<std::size_t>(k)])];
    out.reduced = ThetaVector(BasisKind::Reduced6, six);
    std::vector<int> canonical(kReducedInFull.begin(), kReducedInFull.end());
    std::sort(canonical.begin(), canonical.end());
    out.kept_equals_canonical = out.kept_indices == canonical;
    return out;
}

}  // namespace viewplan
