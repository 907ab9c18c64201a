#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccw/contact.hpp"
#include "ccw/errors.hpp"
#include "ccw/submanifolds.hpp"

namespace ccw::cli {

/// Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::string expected, const std::string& found = {});
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t line_, column_;
    std::string expected_;
};

/// Whitespace-separated token of a command or bundle statement.
struct Word {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct NamedMap {
    std::string source;
    std::string target;
    ParamEmbedding embedding;
};

struct Statement {
    enum class Kind { Chart, Use, Scalar, Form, Field, Point, Map, Bundle, Command };
    Kind kind = Kind::Command;
    std::string name;
    std::size_t line = 0;
    /// Bundle spec or command words; for commands words[0] is the command name.
    std::vector<Word> words;
};

struct Session {
    std::vector<Statement> statements;
    std::map<std::string, Chart> charts;
    std::map<std::string, RationalFunction> scalars;
    std::map<std::string, KForm> forms;
    std::map<std::string, VectorField> fields;
    std::map<std::string, PointQ> points;
    std::map<std::string, NamedMap> maps;
    std::map<std::string, ContactBundle> bundles;
    /// Relative file arguments resolve against this directory.
    std::filesystem::path base_dir;

    std::size_t command_count() const;
};

/// Throws ParseError; catalog constructors may throw other ccw errors.
Session parse_session(std::string_view text, const std::filesystem::path& base_dir = {});

/// Canonical text; parse_session(print_session(s)) reprints identically.
std::string print_session(const Session& s);

enum class Outcome { Pass, Fail, Finding };
std::string outcome_name(Outcome o);

struct Report {
    std::string command;
    Outcome outcome = Outcome::Pass;
    std::string summary;
    nlohmann::json payload;
    double timing_ms = 0.0;
};

struct ExecOptions {
    /// Defaults for commands without their own --box / --grid / --mode.
    std::optional<std::string> box;
    std::optional<std::string> grid;
    std::optional<std::string> mode;
    std::uint64_t seed = 0;
};

struct ExecResult {
    std::vector<Report> reports;
    /// 0 all pass (findings included), 1 any fail, 3 domain error.
    int exit_code = 0;
    std::string error;
};

ExecResult execute(const Session& s, const ExecOptions& opts = {});

enum class Format { Text, Json };

/// Without timing, timing_ms and every nested wallclock_ms are dropped.
std::string emit_report(const std::vector<Report>& reports, Format format, bool timing = true);

/// Checked at parse time: arity, option names and the kinds of referenced names.
void validate_command(const Statement& st, const Session& s);
bool is_command(std::string_view name);

/// "lo..hi" per axis, comma-separated; one interval is broadcast.
Box parse_box(std::string_view text, std::size_t dim);
std::vector<std::size_t> parse_counts(std::string_view text, std::size_t dim);
/// Integer, "p/q" or decimal.
Rational parse_number(std::string_view text);

}  // namespace ccw::cli
