#pragma once

#include <ostream>
#include <span>
#include <string>

#include "bootci/harness.hpp"
#include "bootci/metrics.hpp"
#include "bootci/scenario.hpp"

namespace bootci {

inline constexpr std::string_view kFacetHeader =
    "method,facet,level,scenarios,records,coverage,median_length,mean_length,indicator_median,"
    "indicator_mean,indicator_median_pooled,indicator_mean_pooled";

inline void write_facet_table(std::ostream& os, std::span<const FacetRow> rows, std::string_view facet_name) {
  os << kFacetHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    os << to_token(r.method) << ',' << facet_name << ',' << r.facet_level << ',' << s.scenario_count
       << ',' << s.record_count << ',' << format_float(s.coverage) << ',' << format_float(s.median_length)
       << ',' << format_float(s.mean_length) << ',' << format_float(s.indicator_median) << ','
       << format_float(s.indicator_mean) << ',' << format_float(s.indicator_median_pooled) << ','
       << format_float(s.indicator_mean_pooled) << '\n';
  }
}

inline void write_indicator_balance(std::ostream& os, const IndicatorBalance& b) {
  os << "indicator,aspect,spearman\n"
     << "C/sqrt(1+L),median_length," << format_float(b.sqrt_vs_length) << '\n'
     << "C/sqrt(1+L),coverage," << format_float(b.sqrt_vs_coverage) << '\n'
     << "C/(1+L),median_length," << format_float(b.plain_vs_length) << '\n'
     << "C/(1+L),coverage," << format_float(b.plain_vs_coverage) << '\n';
}

inline void write_audit_table(std::ostream& os, const AuditTable& t) {
  os << "threshold," << format_float(t.threshold) << ",total," << t.total << '\n';
  os << "method,parameter,distribution,count\n";
  for (const auto& r : t.rows)
    os << to_token(r.method) << ',' << to_token(r.parameter) << ',' << to_token(r.distribution) << ','
       << r.count << '\n';
}

}  // namespace bootci
