#include "latentlens/record.hpp"

#include <cmath>
#include <string>

#include "latentlens/error.hpp"

namespace latentlens {

namespace {

constexpr std::array<std::string_view, 17> kExpressionNames = {
    "Bared-teeth", "Bark",      "Blink",     "Brow-raise", "Chewing",    "Coo",
    "Lip-smack",   "Scream",    "Threat",    "Tongue-protrusion", "Yawn", "Look-up",
    "Look-down",   "Look-left", "Look-right", "Tongue-show", "Neutral",
};

template <typename Enum, std::size_t N>
Enum parse_from(const std::array<std::string_view, N>& names, std::string_view name, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) {
      return static_cast<Enum>(i);
    }
  }
  throw FormatError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

constexpr std::array<std::string_view, 2> kSpeciesNames = {"japanese", "rhesus"};
constexpr std::array<std::string_view, 2> kSexNames = {"female", "male"};
constexpr std::array<std::string_view, 2> kSplitNames = {"train", "test"};
constexpr std::array<std::string_view, 4> kOriginNames = {"still", "real_video_frame", "cg_video_frame",
                                                           "transferred"};

}  // namespace

std::string_view to_string(Expression e) noexcept { return kExpressionNames[static_cast<std::size_t>(e)]; }
std::string_view to_string(Species s) noexcept { return kSpeciesNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Sex s) noexcept { return kSexNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Split s) noexcept { return kSplitNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Origin o) noexcept { return kOriginNames[static_cast<std::size_t>(o)]; }

Expression parse_expression(std::string_view name) {
  return parse_from<Expression>(kExpressionNames, name, "expression");
}
Species parse_species(std::string_view name) { return parse_from<Species>(kSpeciesNames, name, "species"); }
Sex parse_sex(std::string_view name) { return parse_from<Sex>(kSexNames, name, "sex"); }
Split parse_split(std::string_view name) { return parse_from<Split>(kSplitNames, name, "split"); }
Origin parse_origin(std::string_view name) { return parse_from<Origin>(kOriginNames, name, "origin"); }

void LatentRecord::validate() const {
  if (id.empty()) {
    throw InvalidArgument("record id must be non-empty");
  }
  if (yaw_deg && !std::isfinite(*yaw_deg)) {
    throw InvalidArgument("record '" + id + "' has a non-finite yaw");
  }
  if (age && !std::isfinite(*age)) {
    throw InvalidArgument("record '" + id + "' has a non-finite age");
  }
}

}  // namespace latentlens
