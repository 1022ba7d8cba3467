#include "nsbox/errors.hpp"

namespace nsbox {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::negative_entry: return "NegativeEntry";
        case Errc::not_normalized: return "NotNormalized";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::weight_sum_invalid: return "WeightSumInvalid";
        case Errc::scenario_mismatch: return "ScenarioMismatch";
        case Errc::missing_setting: return "MissingSetting";
        case Errc::cap_exceeded: return "CapExceeded";
        case Errc::not_no_signaling: return "NotNoSignaling";
        case Errc::unsupported_scenario: return "UnsupportedScenario";
        case Errc::infeasible: return "Infeasible";
        case Errc::infeasible_target: return "InfeasibleTarget";
        case Errc::not_unit_vector: return "NotUnitVector";
        case Errc::degenerate_dot: return "DegenerateDot";
        case Errc::out_of_range: return "OutOfRange";
        case Errc::budget_exceeded: return "BudgetExceeded";
        case Errc::unknown_model: return "UnknownModel";
        case Errc::range_error: return "RangeError";
        case Errc::parse_error: return "ParseError";
        case Errc::wrong_mode: return "WrongMode";
    }
    return "UnknownError";
}

} // namespace nsbox
