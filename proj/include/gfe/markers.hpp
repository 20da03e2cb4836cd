#pragma once

#include <array>
#include <string>
#include <string_view>

#include "gfe/error.hpp"

namespace gfe {

/// The nine grammatical-facial-expression markers, in canonical order.
/// "Assertion" is also published under the name "Affirmative", and "Focus"
/// appears as "emphasis" in the dataset file names; aliases are accepted
/// on input but the canonical order here is what all tables index by.
enum class MarkerClass {
    Assertion = 0,
    YesNoQuestion,
    Negative,
    Topic,
    Conditional,
    DoubtQuestion,
    Focus,
    Relative,
    WhQuestion,
};

inline constexpr int kNumMarkers = 9;

inline constexpr std::array<MarkerClass, kNumMarkers> kAllMarkers = {
    MarkerClass::Assertion,     MarkerClass::YesNoQuestion, MarkerClass::Negative,
    MarkerClass::Topic,         MarkerClass::Conditional,   MarkerClass::DoubtQuestion,
    MarkerClass::Focus,         MarkerClass::Relative,      MarkerClass::WhQuestion,
};

/// Canonical snake_case name, used in configs, reports and file discovery.
inline std::string_view marker_name(MarkerClass m) {
    switch (m) {
        case MarkerClass::Assertion: return "assertion";
        case MarkerClass::YesNoQuestion: return "yn_question";
        case MarkerClass::Negative: return "negative";
        case MarkerClass::Topic: return "topics";
        case MarkerClass::Conditional: return "conditional";
        case MarkerClass::DoubtQuestion: return "doubt_question";
        case MarkerClass::Focus: return "focus";
        case MarkerClass::Relative: return "relative";
        case MarkerClass::WhQuestion: return "wh_question";
    }
    throw Error("invalid MarkerClass value");
}

/// Name used in the dataset file-name convention
/// (`<user>_<marker>_datapoints.txt`); differs from the canonical name
/// where the published files do.
inline std::string_view marker_file_name(MarkerClass m) {
    switch (m) {
        case MarkerClass::Assertion: return "affirmative";
        case MarkerClass::Focus: return "emphasis";
        default: return marker_name(m);
    }
}

/// Parses a marker name, accepting canonical names plus published aliases.
inline MarkerClass marker_from_string(std::string_view s) {
    for (MarkerClass m : kAllMarkers)
        if (s == marker_name(m) || s == marker_file_name(m)) return m;
    if (s == "affirmative" || s == "assertion") return MarkerClass::Assertion;
    if (s == "yes_no_question") return MarkerClass::YesNoQuestion;
    if (s == "topic") return MarkerClass::Topic;
    if (s == "emphasis") return MarkerClass::Focus;
    throw ConfigError("unknown marker: " + std::string(s));
}

}  // namespace gfe
