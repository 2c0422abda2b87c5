#include "rdnm/report.hpp"

#include "json.hpp"

namespace rdnm {

namespace {

using nlohmann::ordered_json;

ordered_json dyadic_json(const Dyadic& v) {
  ordered_json out;
  out["value"] = v.str();
  out["mantissa"] = v.mantissa().get_str();
  out["scale"] = v.scale();
  return out;
}

ordered_json name_list(const MonotoneSystem& sys, const std::vector<std::size_t>& idx) {
  ordered_json out = ordered_json::array();
  for (auto i : idx) out.push_back(sys.name(i));
  return out;
}

}  // namespace

std::string solve_report_json(const SolveReport& r) {
  ordered_json doc;
  doc["schema"] = kSolveReportSchemaVersion;
  doc["status"] = std::string(to_string(r.status));
  doc["epsilon"] = r.epsilon.str();
  ordered_json approx = ordered_json::object();
  for (std::size_t i = 0; i < r.names.size(); ++i) approx[r.names[i]] = dyadic_json(r.approximation[i]);
  doc["approximation"] = std::move(approx);

  ordered_json params;
  params["mode"] = std::string(to_string(r.params.mode));
  params["alpha"] = r.params.alpha.str();
  params["h"] = r.params.h;
  params["g"] = r.params.g;
  params["u"] = r.params.u;
  params["h_effective"] = r.params.h_effective;
  doc["params"] = std::move(params);

  ordered_json bounds;
  bounds["qmin_lower"] = r.bounds.qmin_lower.str();
  bounds["qmin_source"] = std::string(to_string(r.bounds.qmin_source));
  bounds["qmax_upper_exponent"] = r.bounds.qmax_exponent.get_str();
  bounds["qmax_source"] = std::string(to_string(r.bounds.qmax_source));
  doc["bounds"] = std::move(bounds);

  ordered_json structure;
  structure["solved_variables"] = r.solved_variables;
  structure["depth"] = r.depth;
  structure["nonlinear_depth"] = r.nonlinear_depth;
  structure["encoding_bits"] = r.encoding_bits;
  structure["encoding_convention"] = kEncodingConvention;
  doc["structure"] = std::move(structure);

  ordered_json sccs = ordered_json::array();
  for (const auto& s : r.sccs) {
    ordered_json e;
    e["index"] = s.index;
    e["vars"] = s.vars;
    e["nonlinear"] = s.nonlinear;
    e["budget"] = s.budget;
    e["iterations"] = s.iterations;
    e["stalled_at"] = s.stalled_at ? ordered_json(*s.stalled_at) : ordered_json(nullptr);
    e["final_residual"] = s.final_residual.str();
    sccs.push_back(std::move(e));
  }
  doc["sccs"] = std::move(sccs);
  doc["residual"] = r.residual.str();

  ordered_json complexity;
  complexity["c_P"] = r.c_p.get_str();
  complexity["k_P"] = r.k_p.get_str();
  doc["complexity"] = std::move(complexity);
  doc["notes"] = r.notes;
  return doc.dump(2);
}

std::string gmatrix_json(const GMatrix& g) {
  ordered_json doc;
  doc["schema"] = kGMatrixSchemaVersion;
  doc["status"] = std::string(to_string(g.status));
  doc["mode"] = std::string(to_string(g.mode));
  doc["epsilon"] = g.epsilon.str();
  doc["states"] = g.states;
  ordered_json entries = ordered_json::array();
  ordered_json zero = ordered_json::array();
  for (std::size_t u = 0; u < g.entries.size(); ++u) {
    ordered_json row = ordered_json::array();
    ordered_json zrow = ordered_json::array();
    for (std::size_t v = 0; v < g.entries[u].size(); ++v) {
      row.push_back(g.entries[u][v].str());
      zrow.push_back(static_cast<bool>(g.zero[u][v]));
    }
    entries.push_back(std::move(row));
    zero.push_back(std::move(zrow));
  }
  doc["entries"] = std::move(entries);
  doc["zero"] = std::move(zero);

  ordered_json rounding;
  rounding["m"] = g.rounding.m;
  rounding["r"] = g.rounding.r;
  rounding["h_used"] = g.h;
  rounding["g"] = g.g;
  rounding["h_certified_9r4"] = g.rounding.h_r4.get_str();
  rounding["h_variant_9r2"] = g.rounding.h_r2.get_str();
  doc["rounding"] = std::move(rounding);
  doc["nonlinear_depth"] = g.nonlinear_depth;
  doc["c_min"] = g.c_min.str();
  doc["qmin_floor"] = g.qmin_floor.str();
  return doc.dump(2);
}

std::string decomposition_json(const MonotoneSystem& sys, const Decomposition& dec) {
  ordered_json doc;
  ordered_json sccs = ordered_json::array();
  for (std::size_t s = 0; s < dec.sccs.size(); ++s) {
    const Scc& scc = dec.sccs[s];
    ordered_json e;
    e["index"] = s;
    e["vars"] = name_list(sys, scc.vars);
    e["nonlinear"] = scc.nonlinear;
    e["height"] = scc.height;
    e["nonlinear_height"] = scc.nonlinear_height;
    e["depends_on"] = scc.depends_on;
    sccs.push_back(std::move(e));
  }
  doc["sccs"] = std::move(sccs);
  doc["d"] = dec.depth;
  doc["f"] = dec.nonlinear_depth;
  return doc.dump(2);
}

std::string snf_json(const SnfSystem& snf, const MonotoneSystem& original) {
  ordered_json doc;
  doc["system"] = ordered_json::parse(serialize_mps(snf.system));
  ordered_json forms = ordered_json::array();
  for (auto f : snf.forms) forms.push_back(f == EquationForm::product ? "product" : "linear");
  doc["forms"] = std::move(forms);
  ordered_json projection = ordered_json::object();
  for (std::size_t i = 0; i < original.size(); ++i) {
    projection[original.name(i)] = snf.system.name(snf.projection[i]);
  }
  doc["projection"] = std::move(projection);
  return doc.dump(2);
}

std::string clean_json(const MonotoneSystem& original, const CleanedSystem& cleaned) {
  ordered_json doc;
  doc["system"] = ordered_json::parse(serialize_mps(cleaned.system));
  doc["zero_variables"] = name_list(original, cleaned.zero_variables);
  doc["original_index"] = cleaned.original_index;
  return doc.dump(2);
}

std::string bounds_json(const MonotoneSystem& cleaned, const QminLowerBound& qmin,
                        const QmaxUpperBound& qmax) {
  ordered_json doc;
  doc["n"] = cleaned.size();
  doc["encoding_bits"] = encoding_size(cleaned).bits;
  doc["encoding_convention"] = kEncodingConvention;
  doc["qmin_lower"] = qmin.value.str();
  doc["qmin_source"] = std::string(to_string(qmin.source));
  ordered_json candidates;
  auto opt = [](const std::optional<Rational>& v) {
    return v ? ordered_json(v->str()) : ordered_json(nullptr);
  };
  candidates["coefficient_bound"] = opt(qmin.candidates.coefficient_bound);
  candidates["size_bound"] = opt(qmin.candidates.size_bound);
  candidates["iteration_bound"] = opt(qmin.candidates.iteration_bound);
  doc["qmin_candidates"] = std::move(candidates);
  doc["qmax_upper_exponent"] = qmax.exponent.get_str();
  doc["qmax_source"] = std::string(to_string(qmax.source));
  return doc.dump(2);
}

std::string vector_json(const MonotoneSystem& sys, const RVector& values, std::uint64_t steps) {
  ordered_json doc;
  doc["steps"] = steps;
  ordered_json v = ordered_json::object();
  for (std::size_t i = 0; i < sys.size(); ++i) v[sys.name(i)] = values[i].str();
  doc["values"] = std::move(v);
  return doc.dump(2);
}

std::string trace_json(std::size_t scc, const TraceRecord& record) {
  ordered_json doc;
  doc["scc"] = scc;
  doc["k"] = record.k;
  ordered_json x = ordered_json::array();
  for (const auto& v : record.x) x.push_back(v.str());
  doc["x"] = std::move(x);
  doc["residual"] = record.residual.str();
  return doc.dump();
}

}  // namespace rdnm
