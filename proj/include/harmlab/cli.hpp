#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmlab/cayley.hpp"
#include "harmlab/error.hpp"
#include "harmlab/isoperimetry.hpp"
#include "harmlab/window.hpp"

namespace harmlab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Budgets {
  std::size_t ball_cap = kDefaultBallCap;
  std::uint64_t enum_budget = kDefaultEnumerationBudget;
  std::size_t dense_cap = kWindowEdgeBudget;
};

// "ball_cap=N,enum_budget=N,dense_cap=N"; a bare integer sets the ball cap.
Budgets parse_budgets(std::string_view text, Budgets base = {});
// Applies HARMLAB_BUDGET when set.
Budgets budgets_from_env(Budgets base = {});

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

// Doubles use 12 significant digits; NaN raises NumericalFailure.
std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table, const std::string& comment);
// Empty path writes to `fallback`.
void emit_csv(const Table& table, const std::string& path, const std::string& comment, std::ostream& fallback);
void emit_json(const nlohmann::json& doc, const std::string& path, std::ostream& fallback);

// FNV-1a of the compact dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

int exit_code(ErrorKind kind);

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harmlab::cli
