#include "asympair/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "asympair/format.hpp"

namespace asympair {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sup over integers n >= start of exp(slope * n + log_weight * ln n), slope < 0.
double sup_exp_linear_log(double slope, double log_weight, Index start) {
  auto h = [&](double n) { return std::exp(slope * n + log_weight * std::log(n)); };
  double best = h(static_cast<double>(start));
  if (log_weight > 0.0) {
    const double peak = -log_weight / slope;
    for (double n : {std::floor(peak), std::ceil(peak)}) {
      if (n >= static_cast<double>(start)) best = std::max(best, h(n));
    }
  }
  return best;
}

Index start_of(const TailModel& model) {
  return std::visit(Overloaded{[](const GeometricTail& g) { return g.start; },
                               [](const PowerTail& p) { return p.start; },
                               [](const FiniteTail& f) { return f.support_end; },
                               [](const UnknownTail&) { return Index{1}; }},
                    model);
}

TailModel with_start(TailModel model, Index start) {
  std::visit(Overloaded{[&](GeometricTail& g) { g.start = std::max(g.start, start); },
                        [&](PowerTail& p) { p.start = std::max(p.start, start); },
                        [](auto&) {}},
             model);
  return model;
}

double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    double value = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw RefusedError("malformed tail declaration '" + text + "'");
  }
}

}  // namespace

void validate(const TailModel& model) {
  std::visit(Overloaded{
                 [](const GeometricTail& g) {
                   if (!(g.scale > 0.0) || !std::isfinite(g.scale))
                     throw RefusedError("geometric tail needs a positive finite scale");
                   if (!(g.ratio > 0.0 && g.ratio < 1.0))
                     throw RefusedError("geometric tail ratio must lie in (0,1), got " +
                                        format_number(g.ratio));
                   if (g.start < 1) throw RefusedError("tail start index must be >= 1");
                 },
                 [](const PowerTail& p) {
                   if (!(p.scale > 0.0) || !std::isfinite(p.scale))
                     throw RefusedError("power tail needs a positive finite scale");
                   if (!std::isfinite(p.exponent)) throw RefusedError("power tail exponent must be finite");
                   if (p.start < 1) throw RefusedError("tail start index must be >= 1");
                 },
                 [](const FiniteTail& f) {
                   if (f.support_end < 1) throw RefusedError("finite tail bound must be >= 1");
                 },
                 [](const UnknownTail&) {}},
             model);
}

std::string to_string(const TailModel& model) {
  auto suffix = [](Index start) { return start > 1 ? ", from " + std::to_string(start) : std::string{}; };
  return std::visit(
      Overloaded{[&](const GeometricTail& g) {
                   return "geometric(" + format_number(g.scale) + ", " + format_number(g.ratio) +
                          suffix(g.start) + ")";
                 },
                 [&](const PowerTail& p) {
                   return "power(" + format_number(p.scale) + ", " + format_number(p.exponent) +
                          suffix(p.start) + ")";
                 },
                 [](const FiniteTail& f) { return "finite(" + std::to_string(f.support_end) + ")"; },
                 [](const UnknownTail&) { return std::string("unknown"); }},
      model);
}

TailModel parse_tail_model(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::vector<std::string> fields;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    for (std::string field; std::getline(rest, field, ',');) fields.push_back(field);
  }
  auto number = [&](std::size_t i) { return parse_double(fields.at(i), text); };
  auto start = [&](std::size_t i) { return fields.size() > i ? static_cast<Index>(number(i)) : Index{1}; };

  TailModel model;
  if (kind == "unknown" && fields.empty()) {
    model = UnknownTail{};
  } else if (kind == "geometric" && (fields.size() == 2 || fields.size() == 3)) {
    model = GeometricTail{number(0), number(1), start(2)};
  } else if (kind == "power" && (fields.size() == 2 || fields.size() == 3)) {
    model = PowerTail{number(0), number(1), start(2)};
  } else if (kind == "finite" && fields.size() == 1) {
    model = FiniteTail{static_cast<Index>(number(0))};
  } else {
    throw RefusedError("malformed tail declaration '" + text +
                       "' (expected geometric:C,rho[,start] | power:C,s[,start] | finite:p | unknown)");
  }
  validate(model);
  return model;
}

bool is_unknown(const TailModel& model) { return std::holds_alternative<UnknownTail>(model); }
bool is_finite(const TailModel& model) { return std::holds_alternative<FiniteTail>(model); }

double tail_envelope(const TailModel& model, Index n) {
  const double x = static_cast<double>(n);
  return std::visit(Overloaded{[&](const GeometricTail& g) {
                                 return n >= g.start ? g.scale * std::pow(g.ratio, x) : kInf;
                               },
                               [&](const PowerTail& p) {
                                 return n >= p.start ? p.scale * std::pow(x, p.exponent) : kInf;
                               },
                               [&](const FiniteTail& f) { return n >= f.support_end ? 0.0 : kInf; },
                               [](const UnknownTail&) { return kInf; }},
                    model);
}

TailModel tail_of_constant(double value) {
  if (value == 0.0) return FiniteTail{1};
  if (!std::isfinite(value)) return UnknownTail{};
  return PowerTail{std::abs(value), 0.0, 1};
}

TailModel tail_sum(const TailModel& lhs, const TailModel& rhs) {
  if (is_unknown(lhs) || is_unknown(rhs)) return UnknownTail{};
  if (is_finite(lhs) && is_finite(rhs)) {
    return FiniteTail{std::max(std::get<FiniteTail>(lhs).support_end, std::get<FiniteTail>(rhs).support_end)};
  }
  if (is_finite(lhs)) return with_start(rhs, start_of(lhs));
  if (is_finite(rhs)) return with_start(lhs, start_of(rhs));

  const Index start = std::max(start_of(lhs), start_of(rhs));
  if (auto* g1 = std::get_if<GeometricTail>(&lhs)) {
    if (auto* g2 = std::get_if<GeometricTail>(&rhs)) {
      return GeometricTail{g1->scale + g2->scale, std::max(g1->ratio, g2->ratio), start};
    }
  }
  if (auto* p1 = std::get_if<PowerTail>(&lhs)) {
    if (auto* p2 = std::get_if<PowerTail>(&rhs)) {
      return PowerTail{p1->scale + p2->scale, std::max(p1->exponent, p2->exponent), start};
    }
  }
  // One geometric, one power: dominate the geometric part by the power envelope.
  const auto& g = std::holds_alternative<GeometricTail>(lhs) ? std::get<GeometricTail>(lhs)
                                                              : std::get<GeometricTail>(rhs);
  const auto& p = std::holds_alternative<PowerTail>(lhs) ? std::get<PowerTail>(lhs) : std::get<PowerTail>(rhs);
  const double k = sup_exp_linear_log(std::log(g.ratio), -p.exponent, start);
  return PowerTail{g.scale * k + p.scale, p.exponent, start};
}

TailModel tail_product(const TailModel& lhs, const TailModel& rhs) {
  if (is_finite(lhs) && is_finite(rhs)) {
    return FiniteTail{std::min(std::get<FiniteTail>(lhs).support_end, std::get<FiniteTail>(rhs).support_end)};
  }
  if (is_finite(lhs)) return lhs;
  if (is_finite(rhs)) return rhs;
  if (is_unknown(lhs) || is_unknown(rhs)) return UnknownTail{};

  const Index start = std::max(start_of(lhs), start_of(rhs));
  if (auto* g1 = std::get_if<GeometricTail>(&lhs)) {
    if (auto* g2 = std::get_if<GeometricTail>(&rhs)) {
      return GeometricTail{g1->scale * g2->scale, g1->ratio * g2->ratio, start};
    }
  }
  if (auto* p1 = std::get_if<PowerTail>(&lhs)) {
    if (auto* p2 = std::get_if<PowerTail>(&rhs)) {
      return PowerTail{p1->scale * p2->scale, p1->exponent + p2->exponent, start};
    }
  }
  const auto& g = std::holds_alternative<GeometricTail>(lhs) ? std::get<GeometricTail>(lhs)
                                                              : std::get<GeometricTail>(rhs);
  const auto& p = std::holds_alternative<PowerTail>(lhs) ? std::get<PowerTail>(lhs) : std::get<PowerTail>(rhs);
  const double scale = g.scale * p.scale;
  if (p.exponent <= 0.0) {
    return GeometricTail{scale * std::pow(static_cast<double>(start), p.exponent), g.ratio, start};
  }
  // n^s rho^n <= K sqrt(rho)^n with K = sup n^s sqrt(rho)^n.
  const double half = std::sqrt(g.ratio);
  const double k = sup_exp_linear_log(std::log(half), p.exponent, start);
  return GeometricTail{scale * k, half, start};
}

TailModel tail_scale(const TailModel& model, double factor) {
  if (factor == 0.0) return FiniteTail{1};
  if (!std::isfinite(factor)) return UnknownTail{};
  TailModel out = model;
  std::visit(Overloaded{[&](GeometricTail& g) { g.scale *= std::abs(factor); },
                        [&](PowerTail& p) { p.scale *= std::abs(factor); },
                        [](auto&) {}},
             out);
  return out;
}

TailModel tail_power(const TailModel& model, double exponent) {
  if (exponent == 0.0) return PowerTail{1.0, 0.0, 1};
  if (exponent < 0.0 || !std::isfinite(exponent)) return UnknownTail{};
  return std::visit(Overloaded{[&](const GeometricTail& g) -> TailModel {
                                 return GeometricTail{std::pow(g.scale, exponent),
                                                      std::pow(g.ratio, exponent), g.start};
                               },
                               [&](const PowerTail& p) -> TailModel {
                                 return PowerTail{std::pow(p.scale, exponent), p.exponent * exponent, p.start};
                               },
                               [](const FiniteTail& f) -> TailModel { return f; },
                               [](const UnknownTail&) -> TailModel { return UnknownTail{}; }},
                    model);
}

TailModel tail_of_difference(const TailModel& model, int order) {
  return std::visit(Overloaded{[&](const GeometricTail& g) -> TailModel {
                                 return GeometricTail{g.scale * std::pow(1.0 + g.ratio, order), g.ratio, g.start};
                               },
                               [&](const PowerTail& p) -> TailModel {
                                 double factor = 0.0;
                                 double binom = 1.0;
                                 for (int k = 0; k <= order; ++k) {
                                   factor += binom * std::pow(1.0 + k, std::max(p.exponent, 0.0));
                                   binom = binom * (order - k) / (k + 1);
                                 }
                                 return PowerTail{p.scale * factor, p.exponent, p.start};
                               },
                               [](const FiniteTail& f) -> TailModel { return f; },
                               [](const UnknownTail&) -> TailModel { return UnknownTail{}; }},
                    model);
}

TailModel tail_of_remainder(const TailModel& model, int order) {
  return std::visit(Overloaded{[&](const GeometricTail& g) -> TailModel {
                                 return GeometricTail{g.scale * std::pow(1.0 - g.ratio, -order), g.ratio, g.start};
                               },
                               [&](const PowerTail& p) -> TailModel {
                                 const double e = order - 1 + p.exponent;
                                 if (!(e < -1.0)) return UnknownTail{};
                                 return PowerTail{p.scale * (1.0 + 1.0 / (-e - 1.0)), p.exponent + order, p.start};
                               },
                               [](const FiniteTail& f) -> TailModel { return f; },
                               [](const UnknownTail&) -> TailModel { return UnknownTail{}; }},
                    model);
}

TailModel tail_of_cumulative_sum(const TailModel& model) {
  if (start_of(model) > 1) return UnknownTail{};
  if (auto* g = std::get_if<GeometricTail>(&model)) {
    return PowerTail{g->scale * g->ratio / (1.0 - g->ratio), 0.0, 1};
  }
  if (auto* p = std::get_if<PowerTail>(&model)) {
    const double s = p->exponent;
    if (std::abs(s + 1.0) < 1e-12) return UnknownTail{};
    if (s > -1.0) return PowerTail{p->scale * (1.0 + 1.0 / (s + 1.0)), s + 1.0, 1};
    return PowerTail{p->scale * (1.0 + 1.0 / (-s - 1.0)), 0.0, 1};
  }
  return UnknownTail{};
}

}  // namespace asympair
