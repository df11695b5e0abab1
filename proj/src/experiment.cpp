#include "mdisteer/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mdisteer/robustness.hpp"

namespace mdisteer {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Real uniform01(std::mt19937_64& rng) {
  return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

CorrelationTensor sample_correlations(const CorrelationTensor& p, std::uint64_t shots,
                                      std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("sample_correlations: zero shots, use exact data");
  if (!p.lossless()) throw std::invalid_argument("sample_correlations: needs a lossless tensor");
  const auto& d = p.dims();
  auto rng = make_rng(seed, 0);
  std::vector<Real> cdf(d.a * d.b);
  std::vector<std::uint64_t> counts(d.a * d.b);
  Tensor4 out(d);
  for (std::size_t x = 0; x < d.x; ++x) {
    for (std::size_t y = 0; y < d.y; ++y) {
      Real acc = 0.0;
      for (std::size_t a = 0; a < d.a; ++a) {
        for (std::size_t b = 0; b < d.b; ++b) cdf[a * d.b + b] = acc += p(a, b, x, y);
      }
      std::fill(counts.begin(), counts.end(), 0);
      for (std::uint64_t s = 0; s < shots; ++s) {
        const Real u = uniform01(rng) * acc;
        const auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        ++counts[std::min(k, counts.size() - 1)];
      }
      for (std::size_t a = 0; a < d.a; ++a) {
        for (std::size_t b = 0; b < d.b; ++b) {
          out(a, b, x, y) = static_cast<Real>(counts[a * d.b + b]) / static_cast<Real>(shots);
        }
      }
    }
  }
  return CorrelationTensor(d, out.values(), true);
}

namespace {

CorrelationTensor apply_noise(const CorrelationTensor& p, const NoiseSpec& noise) {
  return apply_loss(apply_bias(p, noise.xi), noise.eta);
}

}  // namespace

Real bootstrap_std(const CorrelationTensor& p, std::uint64_t shots, std::size_t n_resamples,
                   std::uint64_t seed, const QuantumInputs& inputs, const NoiseSpec& noise) {
  if (shots == 0) return 0.0;
  if (n_resamples < 2) throw std::invalid_argument("bootstrap_std: needs at least two resamples");
  noise.validate();
  std::vector<Real> s;
  s.reserve(n_resamples);
  for (std::size_t r = 0; r < n_resamples; ++r) {
    const auto rng_seed = make_rng(seed, r + 1)();
    s.push_back(mdi_sm_avg(apply_noise(sample_correlations(p, shots, rng_seed), noise), inputs).value);
  }
  Real mean = 0.0;
  for (Real v : s) mean += v;
  mean /= static_cast<Real>(s.size());
  Real var = 0.0;
  for (Real v : s) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<Real>(s.size() - 1));
}

void SweepConfig::validate() const {
  if (v_grid.empty()) throw std::invalid_argument("sweep: empty visibility grid");
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (!(v_grid[i] >= 0.0 && v_grid[i] <= 1.0)) {
      throw std::invalid_argument("sweep: visibility outside [0, 1]");
    }
    if (i > 0 && v_grid[i] < v_grid[i - 1]) throw std::invalid_argument("sweep: grid not sorted");
  }
  noise.validate();
  if (shots > 0 && resamples < 2) throw std::invalid_argument("sweep: needs at least two resamples");
  if (workers == 0) throw std::invalid_argument("sweep: zero workers");
}

SweepRecord run_point(Real v, const SweepConfig& cfg, std::size_t index) {
  SweepRecord rec;
  rec.v = v;
  rec.shots = cfg.shots;
  try {
    const State rho = werner_state(v);
    const auto m = pauli_mub_assembly();
    const QuantumInputs inputs(pauli_input_states());
    const Assemblage asm_ = assemblage_from_state(rho, m);
    CorrelationTensor p = correlations(asm_, inputs, bell_povm());
    if (cfg.shots > 0) {
      p = sample_correlations(p, cfg.shots, make_rng(cfg.seed, 2 * index)());
      rec.std_s = bootstrap_std(p, cfg.shots, cfg.resamples, make_rng(cfg.seed, 2 * index + 1)(),
                                inputs, cfg.noise);
    }
    const auto avg = mdi_sm_avg(apply_noise(p, cfg.noise), inputs);
    rec.s_avg = avg.value;
    for (std::size_t b = 0; b < 4; ++b) rec.s_b[b] = avg.per_outcome[b].value;
    rec.sr = steering_robustness(asm_);
    rec.er = entanglement_robustness(rho);
    rec.ir = incompatibility_robustness(m);
  } catch (const std::exception& e) {
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    rec.s_avg = rec.sr = rec.er = rec.ir = rec.std_s = nan;
    rec.s_b.fill(nan);
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRecord> out(cfg.v_grid.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next++) < out.size();) out[i] = run_point(cfg.v_grid[i], cfg, i);
  };
  const std::size_t n = std::min(cfg.workers, out.size());
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
  }
  if (!cfg.csv_path.empty()) {
    std::ofstream f(cfg.csv_path);
    if (!f) throw std::runtime_error("sweep: cannot write " + cfg.csv_path);
    f << to_csv(out);
  }
  if (!cfg.plot_path.empty()) {
    std::ofstream f(cfg.plot_path);
    if (!f) throw std::runtime_error("sweep: cannot write " + cfg.plot_path);
    f << plot_script(cfg.csv_path.empty() ? "sweep.csv" : cfg.csv_path);
  }
  return out;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << std::setprecision(12) << kCsvHeader << '\n';
  for (const auto& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << r.v << ',' << r.s_avg;
    for (Real s : r.s_b) os << ',' << s;
    os << ',' << r.sr << ',' << r.er << ',' << r.ir << ',' << r.std_s << ',' << r.shots << ','
       << status << '\n';
  }
  return os.str();
}

std::string plot_script(const std::string& csv_path) {
  std::ostringstream os;
  os << R"(import sys
import pandas as pd
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

csv = sys.argv[1] if len(sys.argv) > 1 else ")" << csv_path << R"("
df = pd.read_csv(csv)
df = df[df["status"] == "ok"]

fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(11, 4.2))
for col, marker in zip(["S_b1", "S_b2", "S_b3", "S_b4"], ["o", "x", "*", "^"]):
    ax_a.plot(df["v"], df[col], marker, fillstyle="none", label=col)
ax_a.errorbar(df["v"], df["S_avg"], yerr=df["std_S"], fmt="D", color="k", ms=4, label="S_avg")
ax_a.axvline(3 ** -0.5, color="grey", ls=":")
ax_a.set_xlabel("visibility v")
ax_a.set_ylabel("MDI steering measure")
ax_a.legend()

ax_b.plot(df["v"], df["S_avg"], "D-", color="k", ms=4, label="S_avg")
ax_b.plot(df["v"], df["SR"], "-", label="SR")
ax_b.plot(df["v"], df["ER"], "^-", label="ER")
ax_b.plot(df["v"], df["IR"], "s-", label="IR")
ax_b.set_xlabel("visibility v")
ax_b.set_ylabel("robustness")
ax_b.legend()

fig.tight_layout()
out = csv.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(out)
)";
  return os.str();
}

}  // namespace mdisteer
