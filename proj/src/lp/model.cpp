#include "copower/lp/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copower::lp {

int LpModel::add_var(std::string name, double lower, double upper, double obj, VarKind kind) {
  if (lower > upper)
    throw std::invalid_argument("variable '" + name + "': lower bound exceeds upper bound");
  vars_.push_back({std::move(name), lower, upper, obj, kind});
  return static_cast<int>(vars_.size()) - 1;
}

int LpModel::add_binary(std::string name, double obj) {
  return add_var(std::move(name), 0.0, 1.0, obj, VarKind::Binary);
}

int LpModel::add_row(std::string name, std::vector<std::pair<int, double>> coeffs,
                     RowSense sense, double rhs) {
  for (auto& [j, a] : coeffs) {
    if (j < 0 || j >= num_vars())
      throw std::invalid_argument("row '" + name + "': unknown column " + std::to_string(j));
    (void)a;
  }
  rows_.push_back({std::move(name), std::move(coeffs), sense, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

int LpModel::add_sos2(std::string name, std::vector<int> vars) {
  if (vars.size() < 3)
    throw std::invalid_argument("sos2 set '" + name + "' needs at least 3 members");
  for (int j : vars)
    if (j < 0 || j >= num_vars())
      throw std::invalid_argument("sos2 set '" + name + "': unknown column " + std::to_string(j));
  sos2_.push_back({std::move(name), std::move(vars)});
  return static_cast<int>(sos2_.size()) - 1;
}

void LpModel::set_bounds(int var, double lower, double upper) {
  if (lower > upper)
    throw std::invalid_argument("variable '" + vars_[var].name + "': lower bound exceeds upper");
  vars_[var].lower = lower;
  vars_[var].upper = upper;
}

int LpModel::num_binaries() const {
  int n = 0;
  for (auto& v : vars_)
    if (v.kind == VarKind::Binary) ++n;
  return n;
}

bool LpModel::has_discrete() const { return num_binaries() > 0 || !sos2_.empty(); }

void LpModel::validate() const {
  for (auto& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper))
      throw std::invalid_argument("variable '" + v.name + "' has NaN bound");
    if (v.kind == VarKind::Binary && (v.lower < -1e-12 || v.upper > 1.0 + 1e-12))
      throw std::invalid_argument("binary '" + v.name + "' must have bounds within [0,1]");
  }
  for (auto& r : rows_)
    if (std::isnan(r.rhs))
      throw std::invalid_argument("row '" + r.name + "' has NaN rhs");
}

std::string LpModel::dump_lp_format() const {
  std::ostringstream os;
  os.precision(12);
  auto term = [&](double a, int j, bool first) {
    if (a >= 0 && !first) os << " + ";
    if (a < 0) os << (first ? "- " : " - ");
    os << std::fabs(a) << " " << vars_[j].name;
  };
  os << (obj_sense_ == ObjSense::Minimize ? "Minimize" : "Maximize") << "\n obj:";
  bool first = true;
  for (int j = 0; j < num_vars(); ++j) {
    if (vars_[j].obj == 0.0) continue;
    os << " ";
    term(vars_[j].obj, j, first);
    first = false;
  }
  os << "\nSubject To\n";
  for (auto& r : rows_) {
    os << " " << r.name << ":";
    first = true;
    for (auto& [j, a] : r.coeffs) {
      os << " ";
      term(a, j, first);
      first = false;
    }
    switch (r.sense) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::Equal: os << " = "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
    }
    os << r.rhs << "\n";
  }
  os << "Bounds\n";
  for (auto& v : vars_) {
    os << " ";
    if (std::isfinite(v.lower)) os << v.lower << " <= ";
    else os << "-inf <= ";
    os << v.name;
    if (std::isfinite(v.upper)) os << " <= " << v.upper;
    os << "\n";
  }
  if (num_binaries() > 0) {
    os << "Binaries\n";
    for (auto& v : vars_)
      if (v.kind == VarKind::Binary) os << " " << v.name;
    os << "\n";
  }
  if (!sos2_.empty()) {
    os << "SOS\n";
    for (auto& s : sos2_) {
      os << " " << s.name << ": S2 ::";
      int w = 1;
      for (int j : s.vars) os << " " << vars_[j].name << ":" << w++;
      os << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace copower::lp
