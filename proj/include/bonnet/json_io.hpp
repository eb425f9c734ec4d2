#pragma once

// JSON snapshots of Bonnet pairs and verification reports. Documents are
// built as nlohmann::ordered_json and printed by write_json, which fixes key
// order (insertion order) and prints every double with 17 significant digits,
// so identical inputs give byte-identical files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "bonnet/bonnet_pair.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/report.hpp"

namespace bonnet {

using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// %.17g; non-finite values become null.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {
inline void write_json(std::ostream& os, const ojson& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << ojson(key).dump() << (indent > 0 ? ": " : ":");
        write_json(os, value, indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat || indent == 0) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ',';
          write_json(os, j[i], 0, 0);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case ojson::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}
}  // namespace detail

inline void write_json(std::ostream& os, const ojson& j, int indent = 2) {
  detail::write_json(os, j, indent, 0);
  os << '\n';
}

inline std::string to_json_string(const ojson& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

// ---------------------------------------------------------------------------
// Encoding.

inline ojson to_json(const GridChart& g) {
  ojson j;
  j["u0"] = g.u0;
  j["u1"] = g.u1;
  j["v0"] = g.v0;
  j["v1"] = g.v1;
  j["nu"] = g.nu;
  j["nv"] = g.nv;
  return j;
}

inline GridChart chart_from_json(const ojson& j) {
  return GridChart(j.at("u0").get<double>(), j.at("u1").get<double>(), j.at("v0").get<double>(),
                   j.at("v1").get<double>(), j.at("nu").get<int>(), j.at("nv").get<int>());
}

template <std::size_t N, class Tag>
ojson to_json(const Coords<N, Tag>& v) {
  ojson a = ojson::array();
  for (double x : v.c) a.push_back(x);
  return a;
}

/// Nested [nu][nv][...] array.
template <class T>
ojson to_json(const Field<T>& f) {
  const GridChart& g = f.chart();
  ojson rows = ojson::array();
  for (int i = 0; i < g.nu; ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < g.nv; ++j) {
      if constexpr (std::is_arithmetic_v<T>)
        row.push_back(f(i, j));
      else
        row.push_back(to_json(f(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
Field<T> field_from_json(const ojson& j, const GridChart& g, const std::string& name) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(g.nu))
    throw PreconditionError("field '" + name + "': expected " + std::to_string(g.nu) + " rows");
  Field<T> f(g);
  for (int i = 0; i < g.nu; ++i) {
    const ojson& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(g.nv))
      throw PreconditionError("field '" + name + "': row " + std::to_string(i) + " needs " + std::to_string(g.nv) +
                              " entries");
    for (int k = 0; k < g.nv; ++k) {
      const ojson& e = row[static_cast<std::size_t>(k)];
      if constexpr (std::is_arithmetic_v<T>) {
        f(i, k) = e.get<double>();
      } else {
        if (!e.is_array() || e.size() != T{}.c.size())
          throw PreconditionError("field '" + name + "': entry (" + std::to_string(i) + "," + std::to_string(k) +
                                  ") has the wrong length");
        for (std::size_t c = 0; c < e.size(); ++c) f(i, k)[c] = e[c].get<double>();
      }
    }
  }
  return f;
}

inline ojson to_json(const Check& c) {
  ojson j;
  j["name"] = c.name;
  j["max"] = c.max;
  j["mean"] = c.mean;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  if (c.ratio) j["ratio"] = *c.ratio;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline ojson to_json(const Report& r) {
  ojson a = ojson::array();
  for (const auto& c : r.checks()) a.push_back(to_json(c));
  return a;
}

// ---------------------------------------------------------------------------
// Bonnet pair snapshots.

inline ojson bivector_basis_json() { return ojson::array({"e12", "e13", "e14", "e23", "e24", "e34"}); }

/// fields object of pair.json.
inline ojson pair_fields_json(const BonnetPairPatch& bp) {
  ojson f;
  f["basis"] = bivector_basis_json();
  f["F"] = to_json(bp.F);
  f["F_plus"] = to_json(bp.Fp);
  f["F_minus"] = to_json(bp.Fm);
  f["n_plus"] = to_json(bp.np);
  f["n_minus"] = to_json(bp.nm);
  f["dF_plus_u"] = to_json(bp.dFp.coeff_u);
  f["dF_plus_v"] = to_json(bp.dFp.coeff_v);
  f["dF_minus_u"] = to_json(bp.dFm.coeff_u);
  f["dF_minus_v"] = to_json(bp.dFm.coeff_v);
  f["dn_plus_u"] = to_json(bp.dnp.coeff_u);
  f["dn_plus_v"] = to_json(bp.dnp.coeff_v);
  f["dn_minus_u"] = to_json(bp.dnm.coeff_u);
  f["dn_minus_v"] = to_json(bp.dnm.coeff_v);
  return f;
}

/// Reads a pair from a document with config.chart and the fields written by
/// pair_fields_json. F_plus, F_minus, n_plus, n_minus are required; missing
/// differentials are replaced by finite differences of those fields, which
/// recover_isothermic usually refuses at its 1e-8 kernel threshold.
inline BonnetPairPatch pair_from_json(const ojson& doc) {
  if (!doc.contains("config") || !doc["config"].contains("chart"))
    throw PreconditionError("pair: missing config.chart");
  if (!doc.contains("fields")) throw PreconditionError("pair: missing fields");
  const GridChart g = chart_from_json(doc["config"]["chart"]);
  const ojson& f = doc["fields"];
  auto req = [&](const char* key) {
    if (!f.contains(key)) throw PreconditionError(std::string("pair: missing field '") + key + "'");
    return field_from_json<Bivector4>(f[key], g, key);
  };
  auto one_form = [&](const char* ku, const char* kv, const Field<Bivector4>& prim) {
    if (f.contains(ku) && f.contains(kv))
      return OneForm<Bivector4>{field_from_json<Bivector4>(f[ku], g, ku), field_from_json<Bivector4>(f[kv], g, kv)};
    return d_scalar(prim);
  };
  BonnetPairPatch bp;
  bp.chart = g;
  bp.Fp = req("F_plus");
  bp.Fm = req("F_minus");
  bp.F = bp.Fp + bp.Fm;
  bp.np = req("n_plus");
  bp.nm = req("n_minus");
  bp.dFp = one_form("dF_plus_u", "dF_plus_v", bp.Fp);
  bp.dFm = one_form("dF_minus_u", "dF_minus_v", bp.Fm);
  bp.dnp = one_form("dn_plus_u", "dn_plus_v", bp.np);
  bp.dnm = one_form("dn_minus_u", "dn_minus_v", bp.nm);
  fundamental_forms(bp);
  return bp;
}

inline ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return ojson::parse(in);
  } catch (const ojson::parse_error& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace bonnet
