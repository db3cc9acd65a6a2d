#pragma once

#include "pcrfle/estimator.hpp"
#include "pcrfle/experiments.hpp"
#include "pcrfle/sample_set.hpp"
#include "pcrfle/sobolev.hpp"
#include "pcrfle/spectral.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pcrfle::io {

/// %.17g formatting (lossless for doubles); "nan", "inf", "-inf".
std::string format_double(double value);

/// Header x1..xd, plus a final "y" column when responses are present.
void write_samples(const std::filesystem::path &path, const SampleSet &samples);
/// Reads a header row, then one point per row. A last column named "y"
/// holds responses. Throws IoError or InvalidInput with the line number.
SampleSet read_samples(const std::filesystem::path &path);

/// One row per pair: index, eigenvalue, then the n vector entries.
void write_eigensystem(const std::filesystem::path &path, const EigenSystem &eig);

/// '#'-prefixed metadata lines, then index, x1..xd, y, fitted.
void write_fit(const std::filesystem::path &path, const SampleSet &samples, const RegressionFit &fit,
               const std::vector<std::pair<std::string, std::string>> &metadata);

/// records.csv: n, rep, K, epsilon, mse.
void write_records(const std::filesystem::path &path, const ExperimentReport &report);
/// summary.csv: n, mean_mse, fitted_slope, theoretical_slope.
void write_summary(const std::filesystem::path &path, const ExperimentReport &report);
/// curve.csv: x, truth, mean_fit (empty mean_fit marks a missing bucket).
void write_curve(const std::filesystem::path &path, const FitCurve &curve);
/// K, epsilon, mse per grid cell.
void write_grid(const std::filesystem::path &path, const GridSearchResult &grid);
/// level, cells, raw, extrapolated.
void write_refinements(const std::filesystem::path &path, const SeminormResult &result);

/// Writes `text` verbatim, replacing any existing file.
void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

} // namespace pcrfle::io
