#include "rgflow/csv.hpp"

#include <cstdio>
#include <fstream>

namespace rgflow {

std::string csv_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows) {
    rows.push_back({std::to_string(r.n), csv_real(r.t), csv_real(r.A_n), csv_real(r.bq_g_n),
                    csv_real(r.bq_f_n), csv_real(r.err_to_Afpstar), csv_real(r.theory_rate_g),
                    csv_real(r.theory_rate_A)});
  }
  write_csv(path,
            {"n", "t", "A_n", "bq_g_n", "bq_f_n", "err_to_Afpstar", "theory_rate_g",
             "theory_rate_A"},
            rows);
}

void write_linear_csv(const std::vector<LinearFlowStep>& steps,
                      const std::vector<Real>& err_vs_oracle, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& r = steps[i];
    const Real cross = i < err_vs_oracle.size() ? err_vs_oracle[i] : 0.0;
    rows.push_back({std::to_string(r.n), csv_real(r.t), csv_real(r.A), csv_real(r.bq_g),
                    csv_real(r.err_to_profile), csv_real(cross)});
  }
  write_csv(path, {"n", "t", "A", "bq_g_n", "err_to_Afpstar", "err_vs_oracle"}, rows);
}

void write_hypothesis_csv(const HypothesisReport& report, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : report.checks)
    rows.push_back({c.id, csv_real(c.residual), csv_real(c.tolerance), c.pass ? "1" : "0"});
  rows.push_back({"tail_exponent", csv_real(report.tail_exponent), "", ""});
  write_csv(path, {"check", "residual", "tolerance", "pass"}, rows);
}

void write_contraction_csv(const ContractionStudy& study, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t li = 0; li < study.Ls.size(); ++li)
    for (std::size_t gi = 0; gi < study.ratios[li].size(); ++gi)
      rows.push_back({csv_real(study.Ls[li]), std::to_string(gi),
                      csv_real(study.ratios[li][gi]), csv_real(study.bound[li])});
  write_csv(path, {"L", "g_index", "ratio", "bound"}, rows);
}

}  // namespace rgflow
