#pragma once

// Rendering of run records as an aligned text table, CSV blocks or JSON.
//
// CSV columns per task:
//   tone     a,b,mode_k,mode_j,lambda,err
//   ess      R,R_cut,lambda,err            (every solved truncation)
//   certify  R_star,inf_driving,bound,verdict
//   compare  hypothesis_met,hypothesis_max_violation,max_violation,argmax_t,max_abs_difference,pass
//   verify   check,max_residual,argmax_t,pass
//   brooks   r,mu_hat                      (tail samples)
// A record with several tasks gets one block per task, each introduced by a
// "# <label> (<task>)" line and separated by a blank line.

#include <string>
#include <string_view>

#include "tonelab/scenario.hpp"

namespace tonelab {

enum class OutputFormat { table, csv, json };

OutputFormat parse_output_format(std::string_view s);

std::string render(const RunRecord& record, OutputFormat format);
/// CSV block (header and rows) of one task result; empty for failed tasks.
std::string render_csv(const TaskResult& result);

/// Writes render(record, format) to path, or to stdout when path is empty or
/// "-". Throws std::runtime_error naming the path on I/O failure.
void emit(const RunRecord& record, OutputFormat format, const std::string& path);

}  // namespace tonelab
