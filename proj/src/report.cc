#include "pftpha/report.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pftpha/error.h"
#include "pftpha/format.h"

namespace pftpha {

std::vector<PosteriorRow> posteriors_by_class(
    const PftModel& model, const std::vector<BasicEventPosterior>& posteriors,
    double tolerance) {
  std::vector<PosteriorRow> out;
  for (const auto& e : model.events) {
    if (!e.is_basic()) continue;
    std::vector<const BasicEventPosterior*> members;
    for (const auto& p : posteriors)
      if (p.event.event_class == e.name) members.push_back(&p);
    if (members.empty()) continue;
    const auto [lo, hi] = std::minmax_element(
        members.begin(), members.end(),
        [](auto* a, auto* b) { return a->posterior < b->posterior; });
    if ((*hi)->posterior - (*lo)->posterior <= tolerance) {
      std::string label = e.name;
      if (!e.params.empty()) {
        label += "(";
        for (std::size_t k = 0; k < e.params.size(); ++k)
          label += (k ? "," : "") + e.params[k].name;
        label += ")";
      }
      out.push_back({label, members.front()->posterior});
    } else {
      for (auto* p : members) out.push_back({p->event.label(), p->posterior});
    }
  }
  return out;
}

std::vector<McsRow> mcs_rows(const std::vector<CutSet>& cut_sets) {
  std::vector<McsRow> rows;
  for (std::size_t i = 0; i < cut_sets.size(); ++i)
    rows.push_back({i + 1, cut_sets[i].render(), cut_sets[i].prior,
                    cut_sets[i].posterior});
  return rows;
}

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i)
    out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

// Left-aligned text columns, numbers right-aligned.
void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows,
                 const std::vector<bool>& numeric) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    std::string text;
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::string pad(width[c] - r[c].size(), ' ');
      if (c) text += "  ";
      text += numeric[c] ? pad + r[c] : r[c] + pad;
    }
    text.erase(text.find_last_not_of(' ') + 1);
    out << text << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::vector<std::vector<std::string>> mcs_cells(const std::vector<McsRow>& rows,
                                                int precision) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({std::to_string(r.rank), r.events,
                     format_significant(r.prior, precision),
                     r.posterior ? format_significant(*r.posterior, precision) : ""});
  return cells;
}

std::vector<std::vector<std::string>> curve_cells(
    const std::vector<UnreliabilityPoint>& points, int precision) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& p : points)
    cells.push_back({format_roundtrip(p.time_hours),
                     format_significant(p.bounds.lower, precision),
                     format_significant(p.bounds.upper, precision)});
  return cells;
}

std::vector<std::vector<std::string>> posterior_cells(
    const std::vector<PosteriorRow>& rows, int precision) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({r.event, format_significant(r.posterior, precision)});
  return cells;
}

const std::vector<std::string> kMcsHeader{"rank", "events", "prior", "posterior"};
const std::vector<std::string> kCurveHeader{"time_hours", "lower", "upper"};
const std::vector<std::string> kPosteriorHeader{"event", "posterior"};

}  // namespace

void write_mcs_csv(std::ostream& out, const std::vector<McsRow>& rows, int precision) {
  write_csv_row(out, kMcsHeader);
  for (const auto& r : mcs_cells(rows, precision)) write_csv_row(out, r);
}

void write_curve_csv(std::ostream& out, const std::vector<UnreliabilityPoint>& points,
                     int precision) {
  write_csv_row(out, kCurveHeader);
  for (const auto& r : curve_cells(points, precision)) write_csv_row(out, r);
}

void write_posterior_csv(std::ostream& out, const std::vector<PosteriorRow>& rows,
                         int precision) {
  write_csv_row(out, kPosteriorHeader);
  for (const auto& r : posterior_cells(rows, precision)) write_csv_row(out, r);
}

void write_mcs_table(std::ostream& out, const std::vector<McsRow>& rows, int precision) {
  const bool any_posterior = std::any_of(rows.begin(), rows.end(),
                                         [](const McsRow& r) { return r.posterior; });
  auto cells = mcs_cells(rows, precision);
  auto header = kMcsHeader;
  if (!any_posterior) {
    header.pop_back();
    for (auto& c : cells) c.pop_back();
  }
  write_table(out, header, cells, {true, false, true, true});
}

void write_curve_table(std::ostream& out, const std::vector<UnreliabilityPoint>& points,
                       int precision) {
  write_table(out, kCurveHeader, curve_cells(points, precision), {true, true, true});
}

void write_posterior_table(std::ostream& out, const std::vector<PosteriorRow>& rows,
                           int precision) {
  write_table(out, kPosteriorHeader, posterior_cells(rows, precision), {false, true});
}

// ---------------------------------------------------------------------------
// Reading

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  int line = 1, column = 0;
  bool quoted = false, in_quotes = false, field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    quoted = field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    ++column;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line, column = 0;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (field_started) throw ParseError(line, column, "quote inside unquoted field");
      in_quotes = quoted = field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled with the newline
    } else if (c == '\n') {
      end_field();
      rows.push_back(std::move(row));
      row.clear();
      ++line;
      column = 0;
    } else {
      if (quoted) throw ParseError(line, column, "text after closing quote");
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError(line, column, "unterminated quoted field");
  if (field_started || !row.empty()) {
    end_field();
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<std::vector<std::string>> checked_rows(
    const std::string& text, const std::vector<std::string>& header) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != header)
    throw ParseError(1, 1, "unexpected CSV header");
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != header.size())
      throw ParseError(static_cast<int>(i) + 2, 1,
                       "expected " + std::to_string(header.size()) + " fields");
  return rows;
}

double number(const std::string& s, std::size_t row) {
  double v = 0.0;
  if (!parse_double(s, v))
    throw ParseError(static_cast<int>(row) + 2, 1, "not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<McsRow> read_mcs_csv(const std::string& text) {
  std::vector<McsRow> out;
  const auto rows = checked_rows(text, kMcsHeader);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    McsRow row;
    const double rank = number(r[0], i);
    if (rank < 1 || rank != std::floor(rank))
      throw ParseError(static_cast<int>(i) + 2, 1, "bad rank '" + r[0] + "'");
    row.rank = static_cast<std::size_t>(rank);
    row.events = r[1];
    row.prior = number(r[2], i);
    if (!r[3].empty()) row.posterior = number(r[3], i);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<UnreliabilityPoint> read_curve_csv(const std::string& text) {
  std::vector<UnreliabilityPoint> out;
  const auto rows = checked_rows(text, kCurveHeader);
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.push_back({number(rows[i][0], i), {number(rows[i][1], i), number(rows[i][2], i)}});
  return out;
}

std::vector<PosteriorRow> read_posterior_csv(const std::string& text) {
  std::vector<PosteriorRow> out;
  const auto rows = checked_rows(text, kPosteriorHeader);
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.push_back({rows[i][0], number(rows[i][1], i)});
  return out;
}

}  // namespace pftpha
