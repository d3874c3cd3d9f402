#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "ksd/diagnostics.hpp"
#include "ksd/gof.hpp"
#include "ksd/kernels.hpp"
#include "ksd/reweight.hpp"
#include "ksd/sequences.hpp"
#include "ksd/stein.hpp"
#include "ksd/targets.hpp"

namespace ksd::io {

using nlohmann::json;

/// Version tag written into every JSON document under "schema".
inline constexpr const char* kSchemaVersion = "ksd/1";

/// 17 significant digits; round-trips every double.
std::string format_double(double value);

/// One point per row, comma separated. A leading non-numeric row is treated
/// as a header. With weighted=true the last column holds the weights.
Sample read_sample_csv(const std::string& path, bool weighted = false);
Sample parse_sample_csv(std::istream& in, bool weighted = false);
void write_sample_csv(std::ostream& out, const Sample& sample, bool weighted = false);

/// Covariates followed by a final 0/1 label column.
Target read_logistic_csv(const std::string& path);

/// Parses a compact spec such as "gaussian:d=2,mean=0" or "mixture:d=1,delta=1.5",
/// a JSON object literal, or "@file.json".
json parse_spec_text(const std::string& text, const std::string& what);

/// {"kind": "gaussian"|"mixture"|"logistic"|"pseudo_huber", ...}.
Target target_from_json(const json& spec);
Target parse_target(const std::string& text);

/// {"kind": "imq"|"gaussian"|"matern32", "c", "beta", "h": number|"median"}.
KernelSpec kernel_from_json(const json& spec);
KernelSpec parse_kernel(const std::string& text);

/// {"kind": "<sequence kind>", "n", "dim", "seed", "delta", "step", "x0", "target"}.
SequenceSpec sequence_from_json(const json& spec);

json to_json(const KsdReport& report);
json to_json(const TestResult& result);
json to_json(const ReweightResult& result);
json to_json(const DecayFit& fit);

/// Small CSV writer with a fixed column list and 17-digit numbers.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns);
  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace ksd::io
