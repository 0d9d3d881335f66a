#pragma once

#include <string>
#include <vector>

#include "mfmp/types.hpp"

namespace mfmp {

// Classic one-feed, two-product column.
struct SimpleColumn {
    StreamSpec feed;
    std::vector<double> top_product;     // d_i >= 0 [mol/s]
    std::vector<double> bottom_product;  // b_i >= 0 [mol/s]
    std::vector<double> net_upper_flows; // signed net flows above the feed;
                                         // equals top_product for consistent columns
    std::string name;
    std::vector<std::string> warnings;   // product-assignment inconsistencies
};

struct UnderwoodResult {
    double v_min = 0.0;                  // minimum vapor above the feed [mol/s]
    double r_min = 0.0;                  // (v_min - D) / D with D = sum of net upper flows
    std::vector<double> feed_roots;      // all interior roots of the feed equation
    std::vector<double> active_roots;    // roots bracketed by distributing components
    double controlling_root = 0.0;
};

// Classic minimum vapor: solve sum alpha_i f_i/(alpha_i - theta) = V_feed for
// the interior feed roots, then V_min = max over candidate roots of
// sum alpha_i d_i/(alpha_i - theta). Roots between the volatilities of
// distributing components are the active set; the maximum is taken over all
// interior roots as a safe superset when the active set is degenerate.
UnderwoodResult underwood_min_vapor(const SimpleColumn& col, const ComponentSystem& components);

// Decomposes a multi-feed, multi-product column into one pseudo simple column
// per feed: top product = positive part of the net flows above the feed,
// bottom product = negated negative part of the net flows below. Component
// flows exceeding the feed's own supply are reported as warnings (the products
// stay as assigned; the net-flow evaluation keeps the column meaningful).
std::vector<SimpleColumn> decompose(const ColumnSpec& spec);

struct DecompositionResult {
    double r_estimate = 0.0;                 // max over per-feed estimates
    std::vector<SimpleColumn> columns;
    std::vector<double> r_by_column;         // reflux imposed on the original column
    std::vector<double> v_top_by_column;     // condenser vapor implied by each column
    std::vector<std::string> warnings;
};

// Baseline estimate: each decomposed column's minimum vapor is propagated to
// the condenser of the original column through the vapor balances and turned
// into a reflux ratio; the estimate is the largest of these.
DecompositionResult decomposition_min_reflux(const ColumnSpec& spec);

}  // namespace mfmp
