#include "driftlab/trajectory.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include "driftlab/format.hpp"

namespace driftlab {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "step,value\n";
  for (std::size_t t = 0; t < traj.values.size(); ++t) {
    out << t << ',' << format_double(traj.values[t]) << '\n';
  }
}

void write_samples_csv(std::ostream& out, std::span<const HittingTimeSample> samples) {
  out << "run_id,seed,stopping_time,censored\n";
  for (const auto& s : samples) {
    out << s.run_id << ',' << s.seed_used << ',' << s.stopping_time << ','
        << (s.censored ? 1 : 0) << '\n';
  }
}

}  // namespace driftlab
