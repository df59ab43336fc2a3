#include "sasakit/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sasakit/rational.hpp"

namespace sasakit {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::MalformedInput, "cannot open '" + tmp + "' for writing");
    out << content;
    if (!out.good()) {
      std::filesystem::remove(tmp);
      fail(Errc::MalformedInput, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(Errc::MalformedInput, "atomic rename to '" + path + "' failed: " + ec.message());
  }
}

namespace {

std::string vec_json(const VecD& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt17(v(i));
  }
  return s + "]";
}

std::string vecq_json(const VecQ& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += "\"" + to_string(v(i)) + "\"";
  }
  return s + "]";
}

std::string matz_json_rows(const MatZ& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) s += ",";
    s += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ",";
      s += m(r, c).str();
    }
    s += "]";
  }
  return s + "]";
}

std::string matz_json_cols(const MatZ& m) {
  std::string s = "[";
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (c) s += ",";
    s += "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r) s += ",";
      s += m(r, c).str();
    }
    s += "]";
  }
  return s + "]";
}

std::string vec_text(const VecD& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt17(v(i));
  }
  return s + ")";
}

std::string vecq_text(const VecQ& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v(i));
  }
  return s + ")";
}

std::string regularity_json(const RegularityTag& tag) {
  if (tag.kind == RegularityTag::RationalReeb) {
    std::string s = "{\"kind\":\"RationalReeb\",\"certificate\":[";
    for (size_t i = 0; i < tag.certificate.size(); ++i) {
      if (i) s += ",";
      s += "\"" + tag.certificate[i].first.str() + "/" + tag.certificate[i].second.str() + "\"";
    }
    return s + "]}";
  }
  return "{\"kind\":\"IrregularNumeric\"}";
}

}  // namespace

std::string RunReport::to_json() const {
  std::ostringstream os;
  os << "{\"tool\":\"" << kToolVersion << "\"";
  os << ",\"command\":\"" << json_escape(command) << "\"";
  os << ",\"input\":{\"name\":\"" << json_escape(name) << "\",\"dim\":" << dim
     << ",\"normals\":" << matz_json_rows(normals) << "}";
  if (gamma) {
    os << ",\"gamma\":{\"components\":" << vecq_json(gamma->gamma)
       << ",\"ell\":" << gamma->ell.str() << "}";
  }
  if (rays) os << ",\"rays\":" << matz_json_cols(*rays);
  if (reeb) {
    os << ",\"reeb\":{\"label\":\"" << json_escape(reeb->label) << "\",\"xi\":" << vec_json(reeb->xi)
       << ",\"on_slice\":" << (reeb->on_slice ? "true" : "false")
       << ",\"interior\":" << (reeb->interior ? "true" : "false") << "}";
  }
  if (minimize) {
    const MinimizeResult& r = minimize->result;
    os << ",\"minimize\":{\"x_c\":" << vec_json(r.x_c) << ",\"value\":" << fmt17(r.value)
       << ",\"slice_grad_norm\":" << fmt17(r.slice_grad_norm)
       << ",\"iterations\":" << r.iterations
       << ",\"converged\":" << (r.converged ? "true" : "false")
       << ",\"regularity\":" << regularity_json(r.regularity) << "}";
  }
  if (volume) {
    os << ",\"volume\":{\"xi\":" << vec_json(volume->xi) << ",\"value\":" << fmt17(volume->value)
       << ",\"grad\":" << vec_json(volume->grad)
       << ",\"euler_residual\":" << fmt17(volume->euler_residual) << "}";
  }
  if (futaki) {
    const FutakiReport& r = futaki->report;
    os << ",\"futaki\":{\"xi\":" << vec_json(futaki->xi)
       << ",\"projected_grad\":" << vec_json(r.projected_grad)
       << ",\"grad_norm\":" << fmt17(r.grad_norm)
       << ",\"sigma_barycenter\":" << vec_json(r.sigma_barycenter)
       << ",\"barycenter_norm\":" << fmt17(r.barycenter_norm) << ",\"verdict\":\""
       << (r.verdict == FutakiVerdict::UnobstructedAtTolerance ? "UnobstructedAtTolerance"
                                                               : "Obstructed")
       << "\",\"tol\":" << fmt17(r.tol) << ",\"fitted_ratio\":" << fmt17(r.fitted_ratio)
       << ",\"collinearity_residual\":" << fmt17(r.collinearity_residual) << "}";
  }
  if (soliton) {
    const SolitonResult& r = soliton->result;
    os << ",\"soliton\":{\"xi\":" << vec_json(soliton->xi) << ",\"c\":" << vec_json(r.c)
       << ",\"residual\":" << fmt17(r.residual) << ",\"iterations\":" << r.iterations
       << ",\"c_ambient\":" << vec_json(r.c_ambient) << "}";
  }
  if (potential) {
    os << ",\"potential_check\":{\"xi\":" << vec_json(potential->xi)
       << ",\"grid_radius\":" << fmt17(potential->radius) << ",\"samples\":" << potential->samples
       << ",\"asym_sup\":" << fmt17(potential->asym_sup) << ",\"ma_sup\":" << fmt17(potential->ma_sup)
       << ",\"asym_proxy\":" << fmt17(potential->asym_proxy)
       << ",\"ma_proxy\":" << fmt17(potential->ma_proxy) << ",\"skipped\":" << potential->skipped
       << ",\"total\":" << potential->total << ",\"csv\":\"" << json_escape(potential->csv_path)
       << "\"}";
  }
  os << "}\n";
  return os.str();
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << kToolVersion << " - " << command << "\n";
  os << "input: " << name << " (dim " << dim << ", " << normals.rows() << " normals)\n";
  if (gamma) {
    os << "gamma: " << vecq_text(gamma->gamma) << "   ell: " << gamma->ell.str() << "\n";
  }
  if (rays) {
    os << "rays (" << rays->cols() << "):\n";
    for (Eigen::Index c = 0; c < rays->cols(); ++c) {
      os << "  (";
      for (Eigen::Index r = 0; r < rays->rows(); ++r) {
        if (r) os << ", ";
        os << (*rays)(r, c).str();
      }
      os << ")\n";
    }
  }
  if (reeb) {
    os << reeb->label << " Reeb: " << vec_text(reeb->xi)
       << "  on-slice: " << (reeb->on_slice ? "yes" : "no")
       << "  interior: " << (reeb->interior ? "yes" : "no") << "\n";
  }
  if (minimize) {
    const MinimizeResult& r = minimize->result;
    os << "x_c: " << vec_text(r.x_c) << "\n";
    os << "V(x_c): " << fmt17(r.value) << "   slice gradient norm: " << fmt17(r.slice_grad_norm)
       << "   iterations: " << r.iterations << "\n";
    if (r.regularity.kind == RegularityTag::RationalReeb) {
      os << "regularity: RationalReeb (";
      for (size_t i = 0; i < r.regularity.certificate.size(); ++i) {
        if (i) os << ", ";
        os << r.regularity.certificate[i].first.str() << "/"
           << r.regularity.certificate[i].second.str();
      }
      os << ")\n";
    } else {
      os << "regularity: IrregularNumeric\n";
    }
    if (!r.converged) os << "warning: " << r.diagnostic << "\n";
  }
  if (volume) {
    os << "V(" << vec_text(volume->xi) << ") = " << fmt17(volume->value) << "\n";
    os << "grad V: " << vec_text(volume->grad)
       << "   Euler residual: " << fmt17(volume->euler_residual) << "\n";
  }
  if (futaki) {
    const FutakiReport& r = futaki->report;
    os << "Futaki at " << vec_text(futaki->xi) << ":\n";
    os << "  projected gradient: " << vec_text(r.projected_grad)
       << "  norm: " << fmt17(r.grad_norm) << "\n";
    os << "  Sigma barycenter:   " << vec_text(r.sigma_barycenter)
       << "  norm: " << fmt17(r.barycenter_norm) << "\n";
    os << "  verdict: "
       << (r.verdict == FutakiVerdict::UnobstructedAtTolerance ? "UnobstructedAtTolerance"
                                                               : "Obstructed")
       << " (tol " << fmt17(r.tol) << ")\n";
    os << "  fitted barycenter/gradient ratio: " << fmt17(r.fitted_ratio)
       << " (relative collinearity residual " << fmt17(r.collinearity_residual) << ")\n";
  }
  if (soliton) {
    const SolitonResult& r = soliton->result;
    os << "soliton at " << vec_text(soliton->xi) << ": c = " << vec_text(r.c) << "\n";
    os << "  residual: " << fmt17(r.residual) << "   iterations: " << r.iterations
       << "   ambient: " << vec_text(r.c_ambient) << "\n";
  }
  if (potential) {
    os << "potential check at " << vec_text(potential->xi) << " on [-" << fmt17(potential->radius)
       << "," << fmt17(potential->radius) << "]^" << (dim - 1) << " (" << potential->samples
       << " per axis):\n";
    os << "  sup|u0 - vbar| = " << fmt17(potential->asym_sup)
       << "   growth proxy: " << fmt17(potential->asym_proxy) << "\n";
    os << "  sup|log det Hess u0 + (2m+2) u0| = " << fmt17(potential->ma_sup)
       << "   growth proxy: " << fmt17(potential->ma_proxy) << "\n";
    os << "  skipped points: " << potential->skipped << " / " << potential->total << "\n";
    if (!potential->csv_path.empty()) os << "  csv: " << potential->csv_path << "\n";
  }
  if (!timings.empty()) {
    os << "timings:";
    for (const auto& t : timings) os << " " << t.name << " " << fmt17(t.ms) << " ms;";
    os << "\n";
  }
  return os.str();
}

std::string potential_csv(const PotentialCheckReport& rep) {
  std::ostringstream os;
  for (int i = 0; i < rep.m; ++i) os << "x" << (i + 1) << ",";
  os << "u0,vbar,diff,ma_residual\n";
  for (const auto& row : rep.rows) {
    for (int i = 0; i < rep.m; ++i) os << fmt17(row.x(i)) << ",";
    if (row.skipped) {
      os << "nan,nan,nan,nan\n";
    } else {
      os << fmt17(row.u0_value) << "," << fmt17(row.vbar_value) << "," << fmt17(row.diff) << ","
         << fmt17(row.ma_residual) << "\n";
    }
  }
  return os.str();
}

}  // namespace sasakit
