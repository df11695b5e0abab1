#include "mdisteer/io.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

namespace mdisteer {

Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return Json::parse(f);
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

SweepConfig sweep_config_from_json(const Json& j) {
  SweepConfig cfg;
  cfg.v_grid = j.at("v_grid").get<std::vector<Real>>();
  cfg.shots = j.value("shots", std::uint64_t{0});
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.resamples = j.value("resamples", std::size_t{100});
  cfg.workers = j.value("workers", std::size_t{1});
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    cfg.noise.eta = n.value("eta", 1.0);
    if (n.contains("xi")) cfg.noise.xi = n.at("xi").get<std::array<Real, 4>>();
  }
  if (j.contains("outputs")) {
    cfg.csv_path = j.at("outputs").value("csv", std::string());
    cfg.plot_path = j.at("outputs").value("plot", std::string());
  }
  cfg.validate();
  return cfg;
}

}  // namespace mdisteer

namespace nlohmann {

using namespace mdisteer;

namespace {

json operators_json(std::size_t n_settings, std::size_t n_outcomes,
                    const std::function<const HermitianOperator&(std::size_t, std::size_t)>& get) {
  json members = json::array();
  for (std::size_t x = 0; x < n_settings; ++x) {
    for (std::size_t a = 0; a < n_outcomes; ++a) {
      members.push_back({{"a", a}, {"x", x}, {"operator", get(a, x)}});
    }
  }
  return members;
}

std::vector<std::vector<HermitianOperator>> operators_from_json(const json& j) {
  const auto n_settings = j.at("n_settings").get<std::size_t>();
  const auto n_outcomes = j.at("n_outcomes").get<std::size_t>();
  const auto dim = j.at("dim").get<Eigen::Index>();
  std::vector<std::vector<HermitianOperator>> ops(
      n_settings, std::vector<HermitianOperator>(n_outcomes));
  std::vector<std::vector<bool>> seen(n_settings, std::vector<bool>(n_outcomes, false));
  for (const auto& m : j.at("members")) {
    const auto a = m.at("a").get<std::size_t>();
    const auto x = m.at("x").get<std::size_t>();
    if (a >= n_outcomes || x >= n_settings) throw std::invalid_argument("json: member index out of range");
    if (seen[x][a]) throw std::invalid_argument("json: duplicate member");
    seen[x][a] = true;
    ops[x][a] = m.at("operator").get<HermitianOperator>();
    if (ops[x][a].dim() != dim) throw DimensionError("json: member dimension differs from dim");
  }
  for (const auto& row : seen) {
    for (bool s : row) {
      if (!s) throw std::invalid_argument("json: missing member");
    }
  }
  return ops;
}

}  // namespace

void adl_serializer<HermitianOperator>::to_json(json& j, const HermitianOperator& h) {
  const auto n = h.dim();
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < n; ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < n; ++c) {
      rr.push_back(h.matrix()(r, c).real());
      ir.push_back(h.matrix()(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  j = {{"dim", n}, {"re", re}, {"im", im}};
}

HermitianOperator adl_serializer<HermitianOperator>::from_json(const json& j) {
  const auto n = j.at("dim").get<Eigen::Index>();
  if (n <= 0) throw std::invalid_argument("json: operator dim must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("json: operator rows do not match dim");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (re[r].size() != static_cast<std::size_t>(n) || im[r].size() != static_cast<std::size_t>(n)) {
      throw DimensionError("json: operator columns do not match dim");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Complex(re[r][c].get<Real>(), im[r][c].get<Real>());
  }
  return HermitianOperator(m);
}

void adl_serializer<State>::to_json(json& j, const State& s) { j = s.op(); }

State adl_serializer<State>::from_json(const json& j) {
  return State(j.get<HermitianOperator>());
}

void adl_serializer<Assemblage>::to_json(json& j, const Assemblage& s) {
  j = {{"n_settings", s.n_settings()},
       {"n_outcomes", s.n_outcomes()},
       {"dim", s.dim()},
       {"members", operators_json(s.n_settings(), s.n_outcomes(),
                                  [&](std::size_t a, std::size_t x) -> const HermitianOperator& {
                                    return s(a, x);
                                  })}};
}

Assemblage adl_serializer<Assemblage>::from_json(const json& j) {
  return Assemblage(operators_from_json(j));
}

void adl_serializer<SteeringWitness>::to_json(json& j, const SteeringWitness& w) {
  j = {{"n_settings", w.n_settings()},
       {"n_outcomes", w.n_outcomes()},
       {"dim", w.dim()},
       {"local_bound", w.local_bound()},
       {"members", operators_json(w.n_settings(), w.n_outcomes(),
                                  [&](std::size_t a, std::size_t x) -> const HermitianOperator& {
                                    return w(a, x);
                                  })}};
}

SteeringWitness adl_serializer<SteeringWitness>::from_json(const json& j) {
  return SteeringWitness(operators_from_json(j), j.at("local_bound").get<Real>());
}

void adl_serializer<CorrelationTensor>::to_json(json& j, const CorrelationTensor& p) {
  const auto& d = p.dims();
  json values = json::array();
  for (std::size_t a = 0; a < d.a; ++a) {
    json va = json::array();
    for (std::size_t b = 0; b < d.b; ++b) {
      json vb = json::array();
      for (std::size_t x = 0; x < d.x; ++x) {
        json vx = json::array();
        for (std::size_t y = 0; y < d.y; ++y) vx.push_back(p(a, b, x, y));
        vb.push_back(vx);
      }
      va.push_back(vb);
    }
    values.push_back(va);
  }
  j = {{"dims", {d.a, d.b, d.x, d.y}}, {"lossless", p.lossless()}, {"values", values}};
}

CorrelationTensor adl_serializer<CorrelationTensor>::from_json(const json& j) {
  const auto dv = j.at("dims").get<std::array<std::size_t, 4>>();
  const TensorDims d{dv[0], dv[1], dv[2], dv[3]};
  const auto& values = j.at("values");
  std::vector<Real> flat;
  flat.reserve(d.size());
  const auto expect = [](const json& node, std::size_t n) {
    if (!node.is_array() || node.size() != n) throw DimensionError("json: correlation values do not match dims");
  };
  expect(values, d.a);
  for (const auto& va : values) {
    expect(va, d.b);
    for (const auto& vb : va) {
      expect(vb, d.x);
      for (const auto& vx : vb) {
        expect(vx, d.y);
        for (const auto& v : vx) flat.push_back(v.get<Real>());
      }
    }
  }
  return CorrelationTensor(d, std::move(flat), j.value("lossless", false));
}

void adl_serializer<QuantumInputs>::to_json(json& j, const QuantumInputs& in) {
  j = json::array();
  for (const auto& s : in.states()) j.push_back(s);
}

QuantumInputs adl_serializer<QuantumInputs>::from_json(const json& j) {
  std::vector<State> states;
  for (const auto& s : j) states.push_back(s.get<State>());
  return QuantumInputs(std::move(states));
}

void adl_serializer<SdpProblem>::to_json(json& j, const SdpProblem& p) {
  json blocks = json::array();
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    json coeffs = json::array();
    for (std::size_t i = 0; i < p.n_vars(); ++i) {
      if (p.has_coefficient(k, i)) coeffs.push_back({{"var", i}, {"operator", p.coefficient(k, i)}});
    }
    blocks.push_back({{"constant", p.blocks()[k].constant}, {"coefficients", coeffs}});
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < p.eq_matrix().rows(); ++r) {
    rows.push_back({{"row", std::vector<Real>(p.eq_matrix().row(r).begin(), p.eq_matrix().row(r).end())},
                    {"rhs", p.eq_rhs()(r)}});
  }
  j = {{"n_vars", p.n_vars()},
       {"objective", std::vector<Real>(p.objective().begin(), p.objective().end())},
       {"blocks", blocks},
       {"equalities", rows}};
}

SdpProblem adl_serializer<SdpProblem>::from_json(const json& j) {
  SdpProblem p(j.at("n_vars").get<std::size_t>());
  const auto c = j.at("objective").get<std::vector<Real>>();
  if (c.size() != p.n_vars()) throw DimensionError("json: objective length differs from n_vars");
  p.objective() = Eigen::Map<const RealVector>(c.data(), static_cast<Eigen::Index>(c.size()));
  for (const auto& b : j.at("blocks")) {
    const auto k = p.add_block(b.at("constant").get<HermitianOperator>());
    for (const auto& f : b.at("coefficients")) {
      p.set_coefficient(k, f.at("var").get<std::size_t>(), f.at("operator").get<HermitianOperator>());
    }
  }
  for (const auto& e : j.value("equalities", json::array())) {
    const auto row = e.at("row").get<std::vector<Real>>();
    p.add_equality(Eigen::Map<const RealVector>(row.data(), static_cast<Eigen::Index>(row.size())),
                   e.at("rhs").get<Real>());
  }
  p.validate();
  return p;
}

void adl_serializer<SdpSolution>::to_json(json& j, const SdpSolution& s) {
  j = {{"status", to_string(s.status)},
       {"x", std::vector<Real>(s.x.begin(), s.x.end())},
       {"primal_value", s.primal_value},
       {"dual_value", s.dual_value},
       {"gap", s.gap},
       {"block_duals", s.block_duals},
       {"eq_duals", std::vector<Real>(s.eq_duals.begin(), s.eq_duals.end())},
       {"iterations", s.iterations},
       {"message", s.message}};
}

SdpSolution adl_serializer<SdpSolution>::from_json(const json& j) {
  SdpSolution s;
  const auto status = j.at("status").get<std::string>();
  if (status == to_string(SdpStatus::Optimal)) {
    s.status = SdpStatus::Optimal;
  } else if (status == to_string(SdpStatus::Infeasible)) {
    s.status = SdpStatus::Infeasible;
  } else if (status == to_string(SdpStatus::Error)) {
    s.status = SdpStatus::Error;
  } else {
    throw std::invalid_argument("json: unknown solver status " + status);
  }
  const auto x = j.at("x").get<std::vector<Real>>();
  s.x = Eigen::Map<const RealVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  s.primal_value = j.at("primal_value").get<Real>();
  s.dual_value = j.at("dual_value").get<Real>();
  s.gap = j.at("gap").get<Real>();
  for (const auto& z : j.at("block_duals")) s.block_duals.push_back(z.get<HermitianOperator>());
  const auto y = j.value("eq_duals", std::vector<Real>{});
  s.eq_duals = Eigen::Map<const RealVector>(y.data(), static_cast<Eigen::Index>(y.size()));
  s.iterations = j.value("iterations", 0);
  s.message = j.value("message", std::string());
  return s;
}

}  // namespace nlohmann
