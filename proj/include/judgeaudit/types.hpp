#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace judgeaudit {

// Benchmark task axis.
enum class TaskKind : uint8_t { CodeGen, CodeRepair, TestGen };

// Difficulty labels are consumed as given; the harness never recomputes them.
enum class Difficulty : uint8_t { Easy, Medium, Hard };

// A/B slot in a pairwise presentation. Used both for the gold position and
// for parsed verdicts.
enum class Side : uint8_t { A, B };

// The thirteen judging conditions. Position carries no injectable text; it is
// realized by evaluating every item under both presentations.
enum class BiasKind : uint8_t {
    NoBias,
    Authority,
    Bandwagon,
    CoT,
    Distraction,
    Diversity,
    FinalOnly,
    ModelName,
    Refined,
    SelfEnhance,
    Sentiment,
    Verbosity,
    Position,
};

inline constexpr int kBiasKindCount = 13;

// Where the gold (benchmark-verified good) candidate is displayed. The
// orig/swap naming is an alias layer on top of this; see PresentationAlias.
enum class Presentation : uint8_t { GoldAtA, GoldAtB };

// How bias text enters the prompt: as the judge-role paragraph, or attached
// inline to each candidate block.
enum class InjectionMode : uint8_t { Preamble, Inline };

enum class ErrorKind : uint8_t { Usage, Config, Corpus, Plan, Store, Backend, Metrics };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // Stable process exit code per error family.
    int exit_code() const {
        switch (kind_) {
            case ErrorKind::Usage: return 2;
            case ErrorKind::Config: return 3;
            case ErrorKind::Corpus: return 4;
            case ErrorKind::Plan: return 5;
            case ErrorKind::Store: return 6;
            case ErrorKind::Backend: return 7;
            case ErrorKind::Metrics: return 8;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

std::string_view to_label(TaskKind task);
std::string_view to_label(Difficulty difficulty);
std::string_view to_label(Side side);
std::string_view to_label(BiasKind bias);
std::string_view to_label(Presentation presentation);
std::string_view to_label(InjectionMode mode);

// Strict parsers: reject anything that is not an exact documented label.
// parse_* variants returning optional are for callers that can recover.
std::optional<TaskKind> parse_task(std::string_view text);
std::optional<Difficulty> parse_difficulty(std::string_view text);
std::optional<Side> parse_side(std::string_view text);

// Lenient on case and separators ("no-bias", "no_bias", "NoBias" all work);
// used for CLI flags and config files, never for corpus fields.
std::optional<BiasKind> parse_bias(std::string_view text);
std::optional<InjectionMode> parse_injection_mode(std::string_view text);

} // namespace judgeaudit
