#ifndef CHRONOSQUEEZE_UNITS_H_
#define CHRONOSQUEEZE_UNITS_H_

#include <string_view>

namespace chronosqueeze {

enum class Dimension { Time, Length, Frequency };

/// SI factor of a unit symbol, e.g. unit_scale("fs", Time) == 1e-15.
/// Accepts "um" and "µm".  Throws InvalidArgumentError for unknown units.
double unit_scale(std::string_view unit, Dimension dim);

/// Parses "0.49 fs", "15um" or a bare number; bare numbers are read in
/// default_unit.  Returns the SI value.
double parse_quantity(std::string_view text, Dimension dim, std::string_view default_unit);
/// As parse_quantity, but expressed in target_unit.  A value already in
/// target_unit comes back unchanged.
double parse_quantity_in(std::string_view text, Dimension dim, std::string_view default_unit,
                         std::string_view target_unit);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_UNITS_H_
