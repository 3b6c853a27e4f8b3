#pragma once

#include <string>
#include <vector>

#include "dra/objective.hpp"
#include "dra/pattern.hpp"

namespace dra {

// Match percentage between a target x and an achieved value y:
// (1 - |y - x| / |x|) * 100. kpi_matched clamps below at 0 to keep percentage
// semantics; kpi_matched_raw returns the unclamped value (may be negative).
// Throws ConfigError when x == 0.
double kpi_matched(double x_target, double y_achieved);
double kpi_matched_raw(double x_target, double y_achieved);

// Harmonic-mean F1 score as a percentage: (2PR/(P+R))*100; defined as 0 when
// both precision and recall are zero. With complement_form set, returns the
// complementary form (1 - F1)*100 instead.
double kpi5_f1(double precision, double recall, bool complement_form = false);

// Relative speed gain over a reference: (1 - exec/ref)*100. Negative when
// slower than the reference. Throws ConfigError when ref <= 0.
double kpi6_speed(double execution_time_s, double reference_time_s);

struct ClassifierStats {
  double precision = 0.0;  // [0,1]
  double recall = 0.0;     // [0,1]
};

struct KpiTimings {
  double execution_time_s = 0.0;
  double reference_time_s = 0.0;
};

// One sample's six key performance indicators (all percentages), plus the
// raw ingredients they were computed from.
struct KpiReport {
  int schema = 1;
  double kpi1_eirp = 0.0;       // matched EIRP
  double kpi2_beamwidth = 0.0;  // mean of matched azimuth/elevation beamwidth
  double kpi3_sll = 0.0;        // mean of matched azimuth/elevation SLL
  double kpi4_demand = 0.0;     // matched offered capacity vs demand
  double kpi5_f1 = 0.0;         // classifier F1 (or its complement form)
  double kpi6_speed = 0.0;      // speed gain vs reference
  double precision = 0.0;
  double recall = 0.0;
  double execution_time_s = 0.0;
  double reference_time_s = 0.0;

  std::string to_json() const;     // flat single-object JSON text
  std::string to_csv_row() const;  // matches csv_header() column order
  static std::string csv_header();
};

// Assemble a per-sample report from the achieved metrics, the demanded vs
// offered capacity, classifier statistics, and timing data.
KpiReport build_report(const BeamSpec& spec, const BeamMetrics& metrics,
                       double demand_mbps, double offered_mbps,
                       const ClassifierStats& cls, const KpiTimings& t,
                       bool kpi5_complement = false);

// Field-wise arithmetic mean over per-sample reports (mean of KPIs, not KPI
// of means). Throws DataError on an empty set.
KpiReport average_reports(const std::vector<KpiReport>& reports);

}  // namespace dra
