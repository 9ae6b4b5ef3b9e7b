#include "chronosqueeze/units.h"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

constexpr std::array<std::pair<std::string_view, double>, 6> kTime{{
    {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}}};
constexpr std::array<std::pair<std::string_view, double>, 5> kLength{{
    {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"cm", 1e-2}}};
constexpr std::array<std::pair<std::string_view, double>, 5> kFrequency{{
    {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double unit_scale(std::string_view unit, Dimension dim) {
  std::string u(trim(unit));
  // Micro sign (U+00B5) and Greek mu (U+03BC) both map to "u".
  for (std::string_view micro : {"\xC2\xB5", "\xCE\xBC"}) {
    if (u.rfind(micro, 0) == 0) u = "u" + u.substr(micro.size());
  }
  auto find = [&](const auto& table) -> double {
    for (const auto& [name, scale] : table) {
      if (name == u) return scale;
    }
    throw InvalidArgumentError("unknown unit '" + std::string(unit) + "'");
  };
  switch (dim) {
    case Dimension::Time: return find(kTime);
    case Dimension::Length: return find(kLength);
    case Dimension::Frequency: return find(kFrequency);
  }
  throw InvalidArgumentError("unknown dimension");
}

namespace {

struct Split {
  double value;
  std::string_view unit;
};

Split split_quantity(std::string_view text, std::string_view default_unit, std::string& storage) {
  storage = std::string(trim(text));
  if (storage.empty()) throw InvalidArgumentError("empty quantity");
  char* end = nullptr;
  const double value = std::strtod(storage.c_str(), &end);
  if (end == storage.c_str() || !std::isfinite(value)) {
    throw InvalidArgumentError("cannot parse quantity '" + storage + "'");
  }
  const std::string_view unit = trim(std::string_view(end));
  return {value, unit.empty() ? default_unit : unit};
}

}  // namespace

double parse_quantity_in(std::string_view text, Dimension dim, std::string_view default_unit,
                         std::string_view target_unit) {
  std::string storage;
  const Split q = split_quantity(text, default_unit, storage);
  const double from = unit_scale(q.unit, dim);
  const double to = unit_scale(target_unit, dim);
  return from == to ? q.value : q.value * (from / to);
}

double parse_quantity(std::string_view text, Dimension dim, std::string_view default_unit) {
  std::string storage;
  const Split q = split_quantity(text, default_unit, storage);
  return q.value * unit_scale(q.unit, dim);
}

}  // namespace chronosqueeze
