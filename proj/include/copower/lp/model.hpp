#pragma once

#include <limits>
#include <string>
#include <vector>

namespace copower::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class ObjSense { Minimize, Maximize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double obj = 0.0;
  VarKind kind = VarKind::Continuous;
};

struct Row {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;  // (column, value)
  RowSense sense = RowSense::Equal;
  double rhs = 0.0;
};

// Ordered variable set of which at most two, adjacent, may be nonzero.
struct Sos2Set {
  std::string name;
  std::vector<int> vars;
};

class LpModel {
 public:
  int add_var(std::string name, double lower, double upper, double obj = 0.0,
              VarKind kind = VarKind::Continuous);
  int add_binary(std::string name, double obj = 0.0);
  int add_row(std::string name, std::vector<std::pair<int, double>> coeffs,
              RowSense sense, double rhs);
  int add_sos2(std::string name, std::vector<int> vars);

  void set_obj_sense(ObjSense s) { obj_sense_ = s; }
  ObjSense obj_sense() const { return obj_sense_; }
  void set_obj_coeff(int var, double c) { vars_[var].obj = c; }
  void set_bounds(int var, double lower, double upper);
  void set_rhs(int row, double rhs) { rows_[row].rhs = rhs; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const;
  bool has_discrete() const;

  const Variable& var(int j) const { return vars_[j]; }
  const Row& row(int i) const { return rows_[i]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Sos2Set>& sos2_sets() const { return sos2_; }

  // Validates internal references and binary/SOS2 conventions; throws
  // std::invalid_argument naming the offending entity.
  void validate() const;

  // LP-format-style text dump for external cross-checking.
  std::string dump_lp_format() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Sos2Set> sos2_;
  ObjSense obj_sense_ = ObjSense::Minimize;
};

}  // namespace copower::lp
