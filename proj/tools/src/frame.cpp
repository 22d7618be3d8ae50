#include "frame.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace rhfluid::cli {

std::string num(double x) { return fmt::format("{:.12g}", x); }
std::string num(std::uint64_t x) { return fmt::format("{}", x); }

void write_csv(std::ostream& os, const Frame& frame) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(frame.header);
  for (const auto& row : frame.rows) line(row);
}

void write_table(std::ostream& os, const Frame& frame) {
  std::vector<std::size_t> width(frame.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], cells[i].size());
    }
  };
  measure(frame.header);
  for (const auto& row : frame.rows) measure(row);

  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += "  ";
      text += fmt::format("{:>{}}", cells[i], width[i]);
    }
    os << text << '\n';
  };
  line(frame.header);
  std::size_t total = 0;
  for (const auto w : width) total += w;
  os << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& row : frame.rows) line(row);
}

void emit(std::ostream& os, const Output& output, Format format) {
  switch (format) {
    case Format::Csv:
      write_csv(os, output.frame);
      break;
    case Format::Json:
      os << output.doc.dump(2) << '\n';
      break;
    case Format::Table:
      if (output.sections.empty()) {
        write_table(os, output.frame);
      } else {
        for (std::size_t i = 0; i < output.sections.size(); ++i) {
          if (i) os << '\n';
          os << output.sections[i].first << '\n';
          write_table(os, output.sections[i].second);
        }
      }
      if (!output.notes.empty()) os << '\n';
      for (const auto& note : output.notes) os << note << '\n';
      break;
  }
}

namespace {

template <typename Map, typename IsZero, typename Emit>
Frame trimmed(const Map& values, std::vector<std::string> header, IsZero is_zero,
              Emit emit) {
  Frame f;
  f.header = std::move(header);
  std::uint32_t last = 1;
  for (const auto& [age, v] : values) {
    if (!is_zero(v)) last = std::max(last, age);
  }
  for (std::uint32_t age = 1; age <= last; ++age) {
    const auto it = values.find(age);
    f.rows.push_back(emit(age, it == values.end() ? nullptr : &it->second));
  }
  return f;
}

}  // namespace

Frame age_frame(const std::map<std::uint32_t, double>& values) {
  return trimmed(
      values, {"age", "value"}, [](double v) { return v == 0.0; },
      [](std::uint32_t age, const double* v) {
        return std::vector<std::string>{num(std::uint64_t{age}), num(v ? *v : 0.0)};
      });
}

Frame age_frame(const std::map<std::uint32_t, MeanStd>& values) {
  return trimmed(
      values, {"age", "value", "stddev"},
      [](const MeanStd& v) { return v.mean == 0.0 && v.stddev == 0.0; },
      [](std::uint32_t age, const MeanStd* v) {
        return std::vector<std::string>{num(std::uint64_t{age}), num(v ? v->mean : 0.0),
                                        num(v ? v->stddev : 0.0)};
      });
}

}  // namespace rhfluid::cli
