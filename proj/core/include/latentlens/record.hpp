#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "latentlens/style_code.hpp"

namespace latentlens {

/// The sixteen macaque expression types plus the neutral reference label.
enum class Expression {
  BaredTeeth,
  Bark,
  Blink,
  BrowRaise,
  Chewing,
  Coo,
  LipSmack,
  Scream,
  Threat,
  TongueProtrusion,
  Yawn,
  LookUp,
  LookDown,
  LookLeft,
  LookRight,
  TongueShow,
  Neutral,
};

inline constexpr std::array<Expression, 16> kMovementExpressions = {
    Expression::BaredTeeth, Expression::Bark,      Expression::Blink,
    Expression::BrowRaise,  Expression::Chewing,   Expression::Coo,
    Expression::LipSmack,   Expression::Scream,    Expression::Threat,
    Expression::TongueProtrusion, Expression::Yawn, Expression::LookUp,
    Expression::LookDown,   Expression::LookLeft,  Expression::LookRight,
    Expression::TongueShow,
};

/// Expressions animated from the eleven CG driving videos.
inline constexpr std::array<Expression, 11> kCgExpressions = {
    Expression::BaredTeeth, Expression::Bark,    Expression::Blink,    Expression::BrowRaise,
    Expression::Chewing,    Expression::Coo,     Expression::LipSmack, Expression::Scream,
    Expression::Threat,     Expression::TongueProtrusion, Expression::Yawn,
};

enum class Species { Japanese, Rhesus };
enum class Sex { Female, Male };
enum class Split { Train, Test };
enum class Origin { Still, RealVideoFrame, CgVideoFrame, Transferred };

std::string_view to_string(Expression e) noexcept;
std::string_view to_string(Species s) noexcept;
std::string_view to_string(Sex s) noexcept;
std::string_view to_string(Split s) noexcept;
std::string_view to_string(Origin o) noexcept;

// Parsers throw FormatError on unknown names. Expression names are the
// hyphenated display names ("Bared-teeth", "Look-left", "Neutral").
Expression parse_expression(std::string_view name);
Species parse_species(std::string_view name);
Sex parse_sex(std::string_view name);
Split parse_split(std::string_view name);
Origin parse_origin(std::string_view name);

/// Latent code plus its labels. Missing labels are empty optionals.
struct LatentRecord {
  std::string id;
  StyleCode code;
  std::optional<Expression> expression;
  std::optional<Species> species;
  std::optional<Sex> sex;
  std::optional<double> age;
  std::optional<double> yaw_deg;
  Split split = Split::Train;
  std::optional<std::string> source_id;
  Origin origin = Origin::Still;

  /// Throws InvalidArgument on an empty id or non-finite age/yaw.
  void validate() const;

  /// source_id when present, otherwise id. Records sharing a group key
  /// always share a split.
  const std::string& group_key() const noexcept { return source_id ? *source_id : id; }
};

}  // namespace latentlens
