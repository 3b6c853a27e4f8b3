#include "dra/kpi.hpp"

#include <cmath>
#include <cstdio>

#include "dra/errors.hpp"

namespace dra {

double kpi_matched_raw(double x, double y) {
  if (x == 0.0)
    throw ConfigError("matched KPI undefined for a zero target");
  return (1.0 - std::abs(y - x) / std::abs(x)) * 100.0;
}

double kpi_matched(double x, double y) {
  return std::max(0.0, kpi_matched_raw(x, y));
}

double kpi5_f1(double precision, double recall, bool complement_form) {
  if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0)
    throw ConfigError("precision and recall must lie in [0, 1]");
  const double f1 = (precision + recall > 0.0)
                        ? 2.0 * precision * recall / (precision + recall)
                        : 0.0;
  return (complement_form ? (1.0 - f1) : f1) * 100.0;
}

double kpi6_speed(double execution_time_s, double reference_time_s) {
  if (!(reference_time_s > 0.0))
    throw ConfigError("speed KPI requires a positive reference time");
  return (1.0 - execution_time_s / reference_time_s) * 100.0;
}

KpiReport build_report(const BeamSpec& spec, const BeamMetrics& metrics,
                       double demand_mbps, double offered_mbps,
                       const ClassifierStats& cls, const KpiTimings& t,
                       bool kpi5_complement) {
  KpiReport r;
  r.kpi1_eirp = kpi_matched(spec.eirp_dbw, metrics.eirp_dbw);
  r.kpi2_beamwidth = 0.5 * (kpi_matched(spec.bw_az_deg, metrics.bw_az_deg) +
                            kpi_matched(spec.bw_el_deg, metrics.bw_el_deg));
  r.kpi3_sll = 0.5 * (kpi_matched(spec.sll_az_db, metrics.sll_az_db) +
                      kpi_matched(spec.sll_el_db, metrics.sll_el_db));
  r.kpi4_demand = kpi_matched(demand_mbps, offered_mbps);
  r.kpi5_f1 = kpi5_f1(cls.precision, cls.recall, kpi5_complement);
  r.kpi6_speed = kpi6_speed(t.execution_time_s, t.reference_time_s);
  r.precision = cls.precision;
  r.recall = cls.recall;
  r.execution_time_s = t.execution_time_s;
  r.reference_time_s = t.reference_time_s;
  return r;
}

KpiReport average_reports(const std::vector<KpiReport>& reports) {
  if (reports.empty())
    throw DataError("cannot average an empty report set");
  KpiReport m;
  for (const auto& r : reports) {
    m.kpi1_eirp += r.kpi1_eirp;
    m.kpi2_beamwidth += r.kpi2_beamwidth;
    m.kpi3_sll += r.kpi3_sll;
    m.kpi4_demand += r.kpi4_demand;
    m.kpi5_f1 += r.kpi5_f1;
    m.kpi6_speed += r.kpi6_speed;
    m.precision += r.precision;
    m.recall += r.recall;
    m.execution_time_s += r.execution_time_s;
    m.reference_time_s += r.reference_time_s;
  }
  const double inv = 1.0 / double(reports.size());
  m.kpi1_eirp *= inv;
  m.kpi2_beamwidth *= inv;
  m.kpi3_sll *= inv;
  m.kpi4_demand *= inv;
  m.kpi5_f1 *= inv;
  m.kpi6_speed *= inv;
  m.precision *= inv;
  m.recall *= inv;
  m.execution_time_s *= inv;
  m.reference_time_s *= inv;
  return m;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}
}  // namespace

std::string KpiReport::to_json() const {
  std::string s = "{";
  s += "\"schema\":" + std::to_string(schema);
  s += ",\"kpi1_eirp\":" + fmt(kpi1_eirp);
  s += ",\"kpi2_beamwidth\":" + fmt(kpi2_beamwidth);
  s += ",\"kpi3_sll\":" + fmt(kpi3_sll);
  s += ",\"kpi4_demand\":" + fmt(kpi4_demand);
  s += ",\"kpi5_f1\":" + fmt(kpi5_f1);
  s += ",\"kpi6_speed\":" + fmt(kpi6_speed);
  s += ",\"precision\":" + fmt(precision);
  s += ",\"recall\":" + fmt(recall);
  s += ",\"execution_time_s\":" + fmt(execution_time_s);
  s += ",\"reference_time_s\":" + fmt(reference_time_s);
  s += "}";
  return s;
}

std::string KpiReport::csv_header() {
  return "schema,kpi1_eirp,kpi2_beamwidth,kpi3_sll,kpi4_demand,kpi5_f1,"
         "kpi6_speed,precision,recall,execution_time_s,reference_time_s";
}

std::string KpiReport::to_csv_row() const {
  std::string s = std::to_string(schema);
  for (double v : {kpi1_eirp, kpi2_beamwidth, kpi3_sll, kpi4_demand, kpi5_f1,
                   kpi6_speed, precision, recall, execution_time_s,
                   reference_time_s}) {
    s += ",";
    s += fmt(v);
  }
  return s;
}

}  // namespace dra
