#pragma once

#include <stdexcept>
#include <string>

namespace nsbox {

// Every failure mode the library reports. Callers branch on the code, not on
// the message text.
enum class Errc {
    negative_entry,
    not_normalized,
    shape_mismatch,
    index_out_of_range,
    weight_sum_invalid,
    scenario_mismatch,
    missing_setting,
    cap_exceeded,
    not_no_signaling,
    unsupported_scenario,
    infeasible,
    infeasible_target,
    not_unit_vector,
    degenerate_dot,
    out_of_range,
    budget_exceeded,
    unknown_model,
    range_error,
    parse_error,
    wrong_mode,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace nsbox
