#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nilcrunch/identities.hpp"
#include "nilcrunch/relspace.hpp"

// JSON assembly for the command-line driver. nlohmann::json keeps object
// keys sorted, so serialized reports are byte-identical across runs with the
// same inputs once the timing field is stripped.

namespace nilcrunch {

using Json = nlohmann::json;

// timing is the one legitimately nondeterministic field
inline Json strip_elapsed(Json j) {
  j.erase("elapsed_ms");
  return j;
}

inline Json probes_json(const std::vector<std::pair<std::uint32_t, bool>>& ps) {
  Json arr = Json::array();
  for (const auto& [deg, full] : ps)
    arr.push_back({{"degree", deg}, {"all_contained", full}});
  return arr;
}

// graded dimensions 1..kmax of the quotient, plus their sum
inline void put_dims(Json& j, const AnyRelSpace& s, std::uint32_t kmax) {
  const auto dims = quotient_dims(s, kmax);
  Json arr = Json::array();
  std::uint64_t tot = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    arr.push_back(dims[k]);
    tot += dims[k];
  }
  j["graded_dims"] = arr;
  j["dim_total"] = tot;
  j["rank"] = total_rank(s);
}

inline Json nilpotency_report(const NilpotencyResult& r,
                              std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = "nilpotency";
  j["n"] = r.n;
  j["d"] = r.d;
  j["field"] = r.field.text();
  j["dmax"] = r.dmax;
  j["reached"] = r.reached;
  j["probes"] = probes_json(r.probes);
  if (r.reached) {
    j["degree"] = r.degree;
    j["certificate"] = r.boundary_observed ? "boundary" : "structural";
    if (r.space) put_dims(j, *r.space, r.degree > 0 ? r.degree - 1 : 0);
  } else {
    j["stopped"] = "dmax";
  }
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

inline Json dims_report(std::uint32_t n, std::uint32_t d, const FieldSpec& f,
                        const AnyRelSpace& s, std::uint32_t kmax,
                        std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = "dims";
  j["n"] = n;
  j["d"] = d;
  j["field"] = f.text();
  j["degree"] = kmax;
  put_dims(j, s, kmax);
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

inline Json basis_report(std::uint32_t n, std::uint32_t d, const FieldSpec& f,
                         const AnyRelSpace& s, std::uint32_t kmax,
                         std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = "basis";
  j["n"] = n;
  j["d"] = d;
  j["field"] = f.text();
  j["degree"] = kmax;
  const WordCodec codec(d);
  Json words = Json::array();
  for (const auto w : basis_words(s, kmax)) words.push_back(codec.text(w));
  j["count"] = words.size();
  j["words"] = words;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

inline Json generators_report(std::uint32_t n, const FieldSpec& f,
                              const std::vector<Generator>& gens) {
  Json j;
  j["schema"] = 1;
  j["command"] = "generators";
  j["n"] = n;
  j["field"] = f.text();
  j["count"] = gens.size();
  Json arr = Json::array();
  for (const auto& g : gens) {
    Json e;
    e["arity"] = g.arity;
    e["label"] = g.label;
    e["terms"] = g.parts.size();
    e["text"] = g.text();
    arr.push_back(e);
  }
  j["generators"] = arr;
  return j;
}

inline Json verify_report(std::uint32_t nmax,
                          const std::vector<IdentityReport>& checks,
                          std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = "verify";
  j["nmax"] = nmax;
  Json arr = Json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    Json e;
    e["name"] = c.name;
    e["n"] = c.n;
    e["modulus"] = c.modulus;
    e["expect_zero"] = c.expect_zero;
    e["zero"] = c.zero;
    e["passed"] = c.passed;
    if (!c.witness.empty()) e["witness"] = c.witness;
    if (!c.passed) ++failed;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["total"] = checks.size();
  j["failed"] = failed;
  j["all_passed"] = failed == 0;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

inline Json oracle_report(std::uint32_t n, std::uint32_t d, std::uint32_t q,
                          std::uint32_t degree, std::uint32_t arg_degree,
                          std::uint64_t rank_reference,
                          std::uint64_t rank_generators, bool match,
                          std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = "oracle-compare";
  j["n"] = n;
  j["d"] = d;
  j["field"] = FieldSpec::finite(q).text();
  j["degree"] = degree;
  j["arg_degree"] = arg_degree;
  j["rank_reference"] = rank_reference;
  j["rank_generators"] = rank_generators;
  j["match"] = match;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

// emitted when a build stopped early; carries enough to pick the work up
inline Json stopped_report(const std::string& command, std::uint32_t n,
                           std::uint32_t d, const FieldSpec& f,
                           const std::string& reason, bool saved,
                           const std::string& checkpoint,
                           std::uint64_t elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  j["n"] = n;
  j["d"] = d;
  j["field"] = f.text();
  j["reached"] = false;
  j["stopped"] = reason;
  if (saved) j["checkpoint"] = checkpoint;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

}  // namespace nilcrunch
