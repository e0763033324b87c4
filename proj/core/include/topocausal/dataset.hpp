#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topocausal {

using State = std::uint16_t;

struct Variable {
  std::string name;
  // Distinct state labels; the position of a label is its state code.
  std::vector<std::string> alphabet;
  std::size_t index = 0;

  std::size_t states() const { return alphabet.size(); }
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Immutable table of categorical observations, stored column-major.
class Dataset {
 public:
  // columns[v][r] is the state code of variable v in row r. Validates every
  // invariant (>= 2 states, unique labels and names, codes in range, >= 1 row)
  // and throws DataError on violation.
  Dataset(std::vector<Variable> variables, std::vector<std::vector<State>> columns);

  std::size_t n_vars() const { return variables_.size(); }
  std::size_t n_rows() const { return n_rows_; }

  const Variable& variable(std::size_t v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<std::string> names() const;

  std::span<const State> column(std::size_t v) const { return columns_.at(v); }
  State at(std::size_t row, std::size_t var) const { return columns_[var][row]; }

  // Same rows restricted to / reordered by `vars`.
  Dataset select(std::span<const std::size_t> vars) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<State>> columns_;
  std::size_t n_rows_ = 0;
};

// CSV dialect: comma separated, mandatory header row, no quoting, no missing
// cells. Alphabets follow first-appearance order of each column's tokens.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::istream& in, std::string_view source = "<stream>");
void write_csv(const Dataset& ds, const std::filesystem::path& path);
void write_csv(const Dataset& ds, std::ostream& out);

// One (variable, state) condition. A negated literal matches every state of
// the variable except `state` (the complement j-bar).
struct Literal {
  std::size_t var = 0;
  State state = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal is(std::size_t var, State state) { return {var, state, false}; }
inline Literal is_not(std::size_t var, State state) { return {var, state, true}; }

// Conjunction of literals over distinct variables.
struct Assignment {
  std::vector<Literal> literals;

  Assignment() = default;
  Assignment(std::initializer_list<Literal> lits) : literals(lits) {}

  bool empty() const { return literals.empty(); }
  bool mentions(std::size_t var) const;
  bool matches(const Dataset& ds, std::size_t row) const;
};

// Throws std::invalid_argument for repeated variables or out-of-range indices.
void validate(const Assignment& a, const Dataset& ds);

// Per-variable, per-state sorted row ids. Lets counting queries scan only the
// rows of their most selective positive literal; counts are unchanged.
class RowIndex {
 public:
  explicit RowIndex(const Dataset& ds);

  std::span<const std::uint32_t> rows(std::size_t var, State state) const {
    return rows_[var][state];
  }

 private:
  std::vector<std::vector<std::vector<std::uint32_t>>> rows_;
};

// Number of rows matching every literal of `a`.
std::size_t count_matching(const Dataset& ds, const Assignment& a,
                           const RowIndex* index = nullptr);

// Maximum-likelihood P(target | given) = count(target AND given) / count(given).
// Returns nullopt ("undefined") when no row matches `given`. Throws
// std::invalid_argument if target and given share a variable.
std::optional<double> prob(const Dataset& ds, const Assignment& target,
                           const Assignment& given, const RowIndex* index = nullptr);

}  // namespace topocausal
