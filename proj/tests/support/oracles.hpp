#pragma once

// Brute-force oracles the property suites compare the library against.
// Everything here is written independently of the implementations under
// test: naive enumeration, pairwise counting, finite differences.

#include <map>
#include <string>
#include <vector>

#include "slampoint/ingest.hpp"

namespace slampoint::testsupport {

// ---------------------------------------------------------------- tree split

struct OracleSplit {
    bool found = false;
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// Exhaustive search over every feature and every midpoint threshold for the
// best weighted-entropy gain; ties break to the lower feature index, then
// the lower threshold. Empty weights mean uniform.
OracleSplit best_split_oracle(const std::vector<std::vector<double>>& X,
                              const std::vector<int>& y, const std::vector<double>& weights,
                              int min_leaf);

// Every admissible candidate split (min_leaf respected, gain above the
// never-split floor), in scan order. Lets callers check argmax membership
// when distinct candidates tie in gain to within rounding.
std::vector<OracleSplit> all_splits_oracle(const std::vector<std::vector<double>>& X,
                                           const std::vector<int>& y,
                                           const std::vector<double>& weights, int min_leaf);

// ---------------------------------------------------------------- roc auc

// Pairwise definition: P(score_pos > score_neg) + 1/2 P(equal).
double pairwise_auc(const std::vector<int>& y, const std::vector<double>& scores);

// ---------------------------------------------------------------- gradients

// Central finite differences of the mean logistic loss at (weights, bias);
// returns d+1 entries, bias last.
std::vector<double> fd_logistic_gradient(const std::vector<std::vector<double>>& X,
                                         const std::vector<int>& y,
                                         const std::vector<double>& weights, double bias,
                                         double step = 1e-5);

// ---------------------------------------------------------------- prefix counts

// Column name -> strictly-prior count, one map per row, recomputed by
// scanning every earlier row.
std::vector<std::map<std::string, int>> naive_accumulate(
    const std::vector<ingest::RawPoint>& points);

// ---------------------------------------------------------------- newton stump

// One exact Newton-step stump on logistic loss: unpenalized second-order
// gain, leaf weights -G/H, unit learning rate.
struct NewtonStump {
    double base = 0.0;  // logit of the clamped positive rate
    bool split_found = false;
    int feature = -1;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;

    double margin(const std::vector<double>& x) const;
};

NewtonStump newton_stump_oracle(const std::vector<std::vector<double>>& X,
                                const std::vector<int>& y);

}  // namespace slampoint::testsupport
