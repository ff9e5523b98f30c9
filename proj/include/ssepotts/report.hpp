#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "partition.hpp"
#include "potts.hpp"
#include "rational.hpp"

namespace ssepotts {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline nlohmann::json rational(const Rational& r) {
  return {{"exact", r.str()}, {"value", r.to_double()}};
}

inline nlohmann::json sets(const std::vector<VertexSet>& parts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : parts) out.push_back(p.ids());
  return out;
}

}  // namespace detail

inline nlohmann::json certificates_json(const PartitionReport& rep) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& c : rep.parts) {
    nlohmann::json j;
    j["size"] = c.size;
    j["sweepConductance"] = c.sweep_conductance ? detail::rational(*c.sweep_conductance) : nlohmann::json();
    j["lambda2"] = c.lambda2 ? detail::number(*c.lambda2) : nlohmann::json();
    j["innerLowerBound"] = c.inner_lower_bound();
    j["exactInnerConductance"] =
        c.exact_inner_conductance ? detail::rational(*c.exact_inner_conductance) : nlohmann::json();
    j["outerConductance"] = detail::rational(c.outer_conductance);
    j["minDegreeRatio"] = detail::rational(c.min_degree_ratio);
    j["innerOk"] = c.inner_ok;
    j["outerOk"] = c.outer_ok;
    j["degreeOk"] = c.degree_ok;
    parts.push_back(std::move(j));
  }
  return {{"parts", parts}, {"ellBelowK", rep.ell_ok}, {"covers", rep.covers}, {"pass", rep.ok()}};
}

inline nlohmann::json constants_json(const PartitionConstants& c) {
  return {{"rhoStar", c.rho_star}, {"phiIn", c.phi_in}, {"phiOut", c.phi_out}, {"tau", c.tau},
          {"lambdaK", c.lambda_k}, {"lambdaKMinus1", c.lambda_k_minus_1}};
}

inline nlohmann::json partition_json(const ExpanderPartition& p) {
  nlohmann::json lambda = nlohmann::json::array();
  for (double x : p.lambda) lambda.push_back(detail::number(x));
  const auto& it = p.iterations;
  return {{"schemaVersion", kSchemaVersion},
          {"k", p.k},
          {"C", p.C},
          {"ell", p.ell()},
          {"lambda", lambda},
          {"constants", constants_json(p.constants)},
          {"parts", detail::sets(p.parts)},
          {"cores", detail::sets(p.cores)},
          {"certificates", certificates_json(p.report)},
          {"iterations",
           {{"mainLoop", it.main_loop},
            {"splitCore", it.split_core},
            {"replaceCore", it.replace_core},
            {"splitPeriphery", it.split_periphery},
            {"mergePeriphery", it.merge_periphery},
            {"moveSweepPart", it.move_sweep_part},
            {"attractionMerge", it.attraction_merge},
            {"coreRemovals", it.core_removals},
            {"vertexMoves", it.vertex_moves},
            {"sweepsComputed", it.sweeps_computed},
            {"budget", it.budget}}}};
}

inline nlohmann::json potts_json(const PottsResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& t : r.per_psi)
    per.push_back({{"colours", t.colours}, {"monochromatic", t.monochromatic}, {"logXi", detail::number(t.log_xi)}});
  return {{"schemaVersion", kSchemaVersion},
          {"logZ", detail::number(r.approx.log_value)},
          {"epsBound", detail::number(r.approx.eps_bound)},
          {"mode", r.mode},
          {"groundStates", r.ground_states},
          {"truncationDepth", r.truncation_depth},
          {"clustersEvaluated", r.clusters_evaluated},
          {"betaThreshold", detail::number(r.beta_threshold)},
          {"badParts", r.bad_parts},
          {"removedEdges", r.removed_edges},
          {"perPsi", per}};
}

inline nlohmann::json oracle_json(double log_z, std::size_t n, std::size_t m, int q, double beta) {
  return {{"schemaVersion", kSchemaVersion},
          {"logZ", detail::number(log_z)},
          {"epsBound", 0.0},
          {"mode", "oracle"},
          {"n", n},
          {"m", m},
          {"q", q},
          {"beta", beta}};
}

}  // namespace ssepotts
