#pragma once

#include "phorslab/decide.hpp"
#include "phorslab/exec.hpp"
#include "phorslab/semantics.hpp"
#include "phorslab/typing.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace phorslab {

inline constexpr const char* kReportSchema = "phors-lab/report";
inline constexpr int kReportVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitNegative = 2, kExitInconclusive = 3 };

// A failure tagged with the module that raised it.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string module, const std::string& msg, int exit_code)
        : std::runtime_error(module + ": " + msg), module(std::move(module)), exit_code(exit_code)
    {
    }
    std::string module;
    int exit_code;
};

// Maps the exception being handled to its module and exit code. Call only
// inside a catch block.
PipelineError tag_current_exception();

nlohmann::json typing_to_json(const TypingReport& r);
nlohmann::json report_header(const std::string& command);

// A finitary scheme ready for compilation.
struct Prepared {
    Scheme scheme;
    TypingReport fin;
    std::optional<TypingReport> inf;  // only consulted when fin rejects
    bool reduced = false;
};

// Accepts with check_fin, or with check_inf followed by reduce_inf.
Prepared prepare(const Scheme& s);

struct AnalyzeOptions {
    unsigned degree = 10;
    Arithmetic mode = Arithmetic::Exact;
    std::size_t var_cap = kDefaultIndexCap;
};

struct Analysis {
    Prepared prepared;
    Fas fas;
    std::optional<TruncSeries> series;  // closed schemes only
    std::optional<Verdict> verdict;     // closed schemes only
    int exit_code = kExitOk;
    nlohmann::json report;
};

Analysis analyze(const Scheme& s, const AnalyzeOptions& opt = {});

// Start coefficients up to z^n of a closed scheme accepted by either checker.
TruncSeries start_series(const Scheme& s, unsigned n, std::size_t var_cap = kDefaultIndexCap);

struct Verification {
    bool equal = false;
    unsigned degree = 0;
    std::string message;
};

// Compares the start coefficients of two closed schemes to degree n. When
// `before` is not finitary its coefficients come from exhaustive enumeration.
Verification verify_same_series(const Scheme& before, const Scheme& after, unsigned n,
                                std::size_t var_cap = kDefaultIndexCap);

// Sum of the start coefficients up to z^cap, in floating point: the
// probability of terminating within cap choices.
long double truncated_p_term(const Scheme& s, unsigned cap);

}  // namespace phorslab
