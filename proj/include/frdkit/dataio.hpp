#pragma once

#include <string>
#include <vector>

#include "frdkit/fit.hpp"

namespace frd {

// Column mapping for delimited-text ingestion. Rows with missing required
// fields are dropped (with a count); treatment values outside {0, 1} reject
// the whole file.
struct DatasetSchema {
  std::string x_col;
  std::string y_col;
  std::string d_col;
  std::vector<std::string> w_cols;
  std::string cluster_col;  // empty = none
};

struct LoadResult {
  Sample sample;
  std::int64_t rows_total = 0;
  std::int64_t rows_dropped = 0;
};

LoadResult load_csv(const std::string& path, const DatasetSchema& schema);

// One (cutoff, bandwidth, estimator) cell of an empirical run. Failed cells
// record their error category instead of aborting the run.
struct CutoffCell {
  double cutoff = 0.0;
  std::string bandwidth_label;  // "rot" or the fixed value
  double h = 0.0;               // resolved bandwidth (0 when unresolved)
  std::string estimator;
  bool ok = false;
  std::string error;  // machine-readable category when !ok
  double tau_hat = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  double lambda_used = 0.0;
  Index n_h = 0, n_plus = 0, n_minus = 0;
  bool denominator_flagged = false;
};

struct CutoffRun {
  double cutoff = 0.0;
  std::vector<CutoffCell> cells;  // ordered by (bandwidth, estimator)
};

struct CiConfig {
  double level = 0.95;
  CritLaw crit_law = CritLaw::StudentT;
  VarianceFlavor variance = VarianceFlavor::HC1;
};

// Estimates every estimator over the cutoff x bandwidth grid, partialling
// out covariates when the sample carries them.
std::vector<CutoffRun> run_cutoffs(const Sample& sample,
                                   const std::vector<double>& cutoffs,
                                   const std::vector<BandwidthRule>& bandwidths,
                                   const std::vector<EstimatorConfig>& estimators,
                                   const CiConfig& ci);

// Shortest round-trip decimal text for a double (to_chars); keeps emitted
// files byte-stable across runs.
std::string format_double(double v);

std::string cutoff_results_csv(const std::vector<CutoffRun>& runs);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace frd
