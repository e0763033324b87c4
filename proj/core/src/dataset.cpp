#include "topocausal/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "topocausal/errors.hpp"

namespace topocausal {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

}  // namespace

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::vector<State>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
  if (variables_.empty()) throw DataError("dataset has no variables");
  if (columns_.size() != variables_.size())
    throw DataError("dataset has " + std::to_string(variables_.size()) + " variables but " +
                    std::to_string(columns_.size()) + " columns");
  n_rows_ = columns_.front().size();
  if (n_rows_ == 0) throw DataError("dataset has no rows");
  if (n_rows_ > std::numeric_limits<std::uint32_t>::max())
    throw DataError("dataset has too many rows");

  std::unordered_set<std::string> names;
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    Variable& var = variables_[v];
    var.index = v;
    if (!names.insert(var.name).second) throw DataError("duplicate variable name '" + var.name + "'");
    if (var.alphabet.size() < 2)
      throw DataError("constant column: variable '" + var.name + "' has fewer than 2 states");
    if (var.alphabet.size() > std::numeric_limits<State>::max())
      throw DataError("variable '" + var.name + "' has too many states");
    std::unordered_set<std::string> labels(var.alphabet.begin(), var.alphabet.end());
    if (labels.size() != var.alphabet.size())
      throw DataError("variable '" + var.name + "' has duplicate state labels");
    if (columns_[v].size() != n_rows_) throw DataError("column '" + var.name + "' has wrong length");
    const auto bad = std::find_if(columns_[v].begin(), columns_[v].end(),
                                  [&](State s) { return s >= var.alphabet.size(); });
    if (bad != columns_[v].end())
      throw DataError("column '" + var.name + "' row " +
                      std::to_string(bad - columns_[v].begin()) + " has an invalid state code");
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

Dataset Dataset::select(std::span<const std::size_t> vars) const {
  std::vector<Variable> vs;
  std::vector<std::vector<State>> cols;
  for (std::size_t v : vars) {
    vs.push_back(variables_.at(v));
    cols.push_back(columns_.at(v));
  }
  return Dataset(std::move(vs), std::move(cols));
}

Dataset parse_csv(std::istream& in, std::string_view source) {
  std::string line;
  if (!read_line(in, line)) throw DataError(where(source, 1) + ": missing header row");
  const std::vector<std::string> header = split_line(line);
  {
    std::unordered_set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c].empty())
        throw DataError(where(source, 1) + ": column " + std::to_string(c + 1) + " has an empty name");
      if (!seen.insert(header[c]).second)
        throw DataError(where(source, 1) + ": duplicate column name '" + header[c] + "'");
    }
  }

  const std::size_t n = header.size();
  std::vector<Variable> variables(n);
  std::vector<std::vector<State>> columns(n);
  std::vector<std::unordered_map<std::string, State>> codes(n);
  for (std::size_t c = 0; c < n; ++c) {
    variables[c].name = header[c];
    variables[c].index = c;
  }

  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != n)
      throw DataError(where(source, line_no) + ": ragged row: expected " + std::to_string(n) +
                      " columns, found " + std::to_string(cells.size()));
    for (std::size_t c = 0; c < n; ++c) {
      if (cells[c].empty())
        throw DataError(where(source, line_no) + ": missing value in column " +
                        std::to_string(c + 1) + " ('" + header[c] + "')");
      auto [it, inserted] = codes[c].try_emplace(cells[c], static_cast<State>(codes[c].size()));
      if (inserted) {
        if (codes[c].size() > std::numeric_limits<State>::max())
          throw DataError(where(source, line_no) + ": column '" + header[c] + "' has too many states");
        variables[c].alphabet.push_back(cells[c]);
      }
      columns[c].push_back(it->second);
    }
  }

  if (columns.front().empty()) throw DataError(std::string(source) + ": empty body (no data rows)");
  for (std::size_t c = 0; c < n; ++c) {
    if (variables[c].alphabet.size() < 2)
      throw DataError(std::string(source) + ": constant column " + std::to_string(c + 1) + " ('" +
                      header[c] + "') has a single value '" + variables[c].alphabet.front() + "'");
  }
  return Dataset(std::move(variables), std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_csv(in, path.string());
}

void write_csv(const Dataset& ds, std::ostream& out) {
  for (std::size_t v = 0; v < ds.n_vars(); ++v) {
    if (v > 0) out << ',';
    out << ds.variable(v).name;
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
      if (v > 0) out << ',';
      out << ds.variable(v).alphabet[ds.at(r, v)];
    }
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(ds, out);
  if (!out) throw DataError("error writing '" + path.string() + "'");
}

bool Assignment::mentions(std::size_t var) const {
  return std::any_of(literals.begin(), literals.end(),
                     [&](const Literal& l) { return l.var == var; });
}

bool Assignment::matches(const Dataset& ds, std::size_t row) const {
  for (const Literal& l : literals) {
    if ((ds.at(row, l.var) == l.state) == l.negated) return false;
  }
  return true;
}

void validate(const Assignment& a, const Dataset& ds) {
  for (std::size_t i = 0; i < a.literals.size(); ++i) {
    const Literal& l = a.literals[i];
    if (l.var >= ds.n_vars()) throw std::invalid_argument("assignment variable out of range");
    if (l.state >= ds.variable(l.var).states())
      throw std::invalid_argument("assignment state out of range");
    for (std::size_t k = 0; k < i; ++k) {
      if (a.literals[k].var == l.var)
        throw std::invalid_argument("assignment mentions variable " + std::to_string(l.var) + " twice");
    }
  }
}

RowIndex::RowIndex(const Dataset& ds) : rows_(ds.n_vars()) {
  for (std::size_t v = 0; v < ds.n_vars(); ++v) {
    rows_[v].resize(ds.variable(v).states());
    const auto col = ds.column(v);
    for (std::size_t r = 0; r < col.size(); ++r) rows_[v][col[r]].push_back(static_cast<std::uint32_t>(r));
  }
}

std::size_t count_matching(const Dataset& ds, const Assignment& a, const RowIndex* index) {
  if (a.empty()) return ds.n_rows();

  const Literal* pivot = nullptr;
  if (index != nullptr) {
    for (const Literal& l : a.literals) {
      if (l.negated) continue;
      if (pivot == nullptr || index->rows(l.var, l.state).size() < index->rows(pivot->var, pivot->state).size())
        pivot = &l;
    }
  }

  std::size_t count = 0;
  if (pivot != nullptr) {
    for (std::uint32_t r : index->rows(pivot->var, pivot->state)) count += a.matches(ds, r);
  } else {
    for (std::size_t r = 0; r < ds.n_rows(); ++r) count += a.matches(ds, r);
  }
  return count;
}

std::optional<double> prob(const Dataset& ds, const Assignment& target, const Assignment& given,
                           const RowIndex* index) {
  validate(target, ds);
  validate(given, ds);
  for (const Literal& l : target.literals) {
    if (given.mentions(l.var))
      throw std::invalid_argument("target and given share variable " + std::to_string(l.var));
  }

  const std::size_t denominator = count_matching(ds, given, index);
  if (denominator == 0) return std::nullopt;
  Assignment joint = given;
  joint.literals.insert(joint.literals.end(), target.literals.begin(), target.literals.end());
  const std::size_t numerator = count_matching(ds, joint, index);
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace topocausal
