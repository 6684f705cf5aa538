#pragma once

// Deterministic CSV output: '.' decimal separator, 17 significant digits,
// byte-identical files for identical inputs.

#include "rgflow/kernel.hpp"
#include "rgflow/oracle.hpp"
#include "rgflow/rg.hpp"
#include "rgflow/types.hpp"

#include <string>
#include <vector>

namespace rgflow {

std::string csv_real(Real v);

/// Header + rows, one line each, '\n' line ends, written in binary mode.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_convergence_csv(const ConvergenceReport& report, const std::string& path);
void write_linear_csv(const std::vector<LinearFlowStep>& rows,
                      const std::vector<Real>& err_vs_oracle, const std::string& path);
void write_hypothesis_csv(const HypothesisReport& report, const std::string& path);
void write_contraction_csv(const ContractionStudy& study, const std::string& path);

}  // namespace rgflow
