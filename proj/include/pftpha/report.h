#ifndef PFTPHA_REPORT_H_
#define PFTPHA_REPORT_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pftpha/measures.h"

namespace pftpha {

/// Text output of measures: CSV (comma separated, header row, `.` decimal
/// point, fields holding commas or quotes are quoted) or an aligned table.
/// Numbers are printed with `precision` significant digits.

inline constexpr int kDefaultPrecision = 6;

/// One row of the per-class basic-event posterior table. `event` is either a
/// ground label, or the class with its formal parameters (`D(i,j)`) when all
/// instances share one value.
struct PosteriorRow {
  std::string event;
  double posterior = 0.0;
};

/// Collapses each basic class whose instances agree within `tolerance`.
std::vector<PosteriorRow> posteriors_by_class(
    const PftModel& model, const std::vector<BasicEventPosterior>& posteriors,
    double tolerance = 1e-12);

struct McsRow {
  std::size_t rank = 0;
  std::string events;
  double prior = 0.0;
  std::optional<double> posterior;
};

std::vector<McsRow> mcs_rows(const std::vector<CutSet>& cut_sets);

void write_mcs_csv(std::ostream& out, const std::vector<McsRow>& rows,
                   int precision = kDefaultPrecision);
void write_curve_csv(std::ostream& out, const std::vector<UnreliabilityPoint>& points,
                     int precision = kDefaultPrecision);
void write_posterior_csv(std::ostream& out, const std::vector<PosteriorRow>& rows,
                         int precision = kDefaultPrecision);

void write_mcs_table(std::ostream& out, const std::vector<McsRow>& rows,
                     int precision = kDefaultPrecision);
void write_curve_table(std::ostream& out, const std::vector<UnreliabilityPoint>& points,
                       int precision = kDefaultPrecision);
void write_posterior_table(std::ostream& out, const std::vector<PosteriorRow>& rows,
                           int precision = kDefaultPrecision);

/// Readers for the CSV written above. Throw ParseError on a malformed
/// document or a header that does not match.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::vector<McsRow> read_mcs_csv(const std::string& text);
std::vector<UnreliabilityPoint> read_curve_csv(const std::string& text);
std::vector<PosteriorRow> read_posterior_csv(const std::string& text);

}  // namespace pftpha

#endif  // PFTPHA_REPORT_H_
