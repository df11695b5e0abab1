#pragma once

// Simulated Werner-state experiment: finite-shot sampling, parametric
// bootstrap error bars and visibility sweeps with CSV and plot-script output.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mdisteer/mdi.hpp"

namespace mdisteer {

/// std::mt19937_64 seeded through std::seed_seq with (seed low, seed high,
/// stream). Both algorithms are fixed by the standard, so streams reproduce
/// across platforms.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
Real uniform01(std::mt19937_64& rng);

/// One multinomial draw of `shots` outcomes per (x, y) over the cells (a, b);
/// returns the empirical frequencies.
CorrelationTensor sample_correlations(const CorrelationTensor& p, std::uint64_t shots,
                                      std::uint64_t seed);

/// Sample standard deviation of mdi_sm_avg over `n_resamples` tensors drawn
/// from `p` with `shots` per (x, y), each passed through `noise`. Zero when
/// shots is zero.
Real bootstrap_std(const CorrelationTensor& p, std::uint64_t shots, std::size_t n_resamples,
                   std::uint64_t seed, const QuantumInputs& inputs,
                   const NoiseSpec& noise = {});

struct SweepConfig {
  std::vector<Real> v_grid;
  /// Shots per (x, y); zero means exact probabilities.
  std::uint64_t shots = 0;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  std::size_t resamples = 100;
  /// Worker threads; grid points are independent.
  std::size_t workers = 1;
  std::string csv_path;
  std::string plot_path;

  void validate() const;
};

struct SweepRecord {
  Real v = 0.0;
  Real s_avg = 0.0;
  std::array<Real, 4> s_b{};
  Real sr = 0.0;
  Real er = 0.0;
  Real ir = 0.0;
  Real std_s = 0.0;
  std::uint64_t shots = 0;
  /// "ok", or the error that aborted this grid point.
  std::string status = "ok";
};

/// One grid point: Werner state, Pauli measurements and inputs, Bell-state
/// measurement. Errors are caught and reported in the status field.
SweepRecord run_point(Real v, const SweepConfig& cfg, std::size_t index);

/// Runs every grid point (rows ordered by v) and writes the CSV and plot
/// script when their paths are set.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

inline constexpr const char* kCsvHeader = "v,S_avg,S_b1,S_b2,S_b3,S_b4,SR,ER,IR,std_S,shots,status";

std::string to_csv(const std::vector<SweepRecord>& records);
/// Python/matplotlib script drawing both figure panels from `csv_path`.
std::string plot_script(const std::string& csv_path);

}  // namespace mdisteer
