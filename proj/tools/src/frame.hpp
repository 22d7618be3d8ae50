#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rhfluid/sim.hpp"
#include "rhfluid/tail.hpp"

namespace rhfluid::cli {

enum class Format { Csv, Json, Table };

// A rectangular block of already formatted cells.
struct Frame {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

using Json = nlohmann::ordered_json;

// Everything a command produces; the chosen format picks what is written.
struct Output {
  Frame frame;  // csv, and table unless sections is non-empty
  std::vector<std::pair<std::string, Frame>> sections;
  std::vector<std::string> notes;  // table format only, after the frame
  Json doc;
};

void emit(std::ostream& os, const Output& output, Format format);

std::string num(double x);
std::string num(std::uint64_t x);

void write_csv(std::ostream& os, const Frame& frame);
void write_table(std::ostream& os, const Frame& frame);

// age,value rows for ages 1..last nonzero (at least age 1).
Frame age_frame(const std::map<std::uint32_t, double>& values);
Frame age_frame(const std::map<std::uint32_t, MeanStd>& values);

}  // namespace rhfluid::cli
