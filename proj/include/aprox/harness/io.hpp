#pragma once

// CSV tables and minimal SVG charts.

#include "aprox/analysis.hpp"
#include "aprox/harness/sweep.hpp"

#include <map>
#include <string>
#include <vector>

namespace aprox::harness {

inline constexpr const char* kCsvHeader =
    "problem,noise,cond,method,accelerated,m,alpha0,seed,k_to_eps,samples_to_eps,final_gap,status";

/// Rows are written in canonical order with 17 significant digits.
void write_csv(const SweepResult& result, const std::string& path);
std::string to_csv(const SweepResult& result);
SweepResult read_csv(const std::string& path);
SweepResult parse_csv(const std::string& text);

void write_profile_csv(const ProfileResult& profile, const std::string& path);
/// method -> (m -> speedup)
void write_speedup_csv(const std::map<std::string, std::map<Index, double>>& table, const std::string& path);

struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

enum class PlotKind { Profile, Speedup, TimeVsStep, Trace };

/// Self-contained SVG line chart. Profiles use a linear x axis and steps;
/// speedups and time-vs-step use log axes, and speedups add the y = m line.
std::string render_svg(const std::vector<Series>& series, PlotKind kind, const std::string& title);
void emit_svg(const std::vector<Series>& series, const std::string& path, PlotKind kind, const std::string& title);

std::string format_double(double v);

}  // namespace aprox::harness
