#include "shm/grid_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace shm {

namespace {

std::string monomial_label(Monomial m) {
  std::string s = "[";
  bool first = true;
  for (int g = 0; g < kMaxGenerators; ++g)
    if (m & (Monomial{1} << g)) {
      if (!first) s += ",";
      s += std::to_string(g);
      first = false;
    }
  return s + "]";
}

Monomial parse_monomial(const std::string& text, int gens) {
  // text is the part between the brackets.
  Monomial m = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long g = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || g < 0 || g >= gens)
      fail(ErrorCode::config_parse, "bad generator '" + item + "' in column label");
    const Monomial bit = Monomial{1} << g;
    if (m & bit) fail(ErrorCode::config_parse, "repeated generator in column label");
    m |= bit;
  }
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Column {
  std::size_t field;
  Monomial mask;
};

}  // namespace

void write_grid_text(std::ostream& out, const std::vector<NamedField>& fields) {
  if (fields.empty()) fail(ErrorCode::shape_mismatch, "no fields to write");
  const GridPtr& grid = fields[0].field.grid();
  const int gens = fields[0].field.generator_count();
  for (const auto& f : fields) {
    if (f.field.grid() != grid) fail(ErrorCode::shape_mismatch, "fields live on different grids");
    if (f.field.generator_count() != gens) fail(ErrorCode::generator_mismatch, "fields use different budgets");
    if (f.name.empty() || f.name.find_first_of(" \t[]#") != std::string::npos)
      fail(ErrorCode::config_parse, "field name '" + f.name + "' is not a plain word");
  }
  out << "# shm-grid 1\n";
  out << "# size " << grid->n(0) << " " << grid->n(1) << " " << format_double(grid->period(0)) << " "
      << format_double(grid->period(1)) << "\n";
  out << "# generators " << gens << "\n";
  std::vector<const std::vector<double>*> data;
  std::string columns = "# columns i j x1 x2";
  for (const auto& f : fields) {
    out << "# field " << f.name << " " << (f.field.twist()[0] ? 1 : 0) << " " << (f.field.twist()[1] ? 1 : 0) << "\n";
    for (const auto& t : f.field.terms()) {
      columns += " " + f.name + monomial_label(t.mask);
      data.push_back(&t.values);
    }
  }
  out << columns << "\n";
  for (int i = 0; i < grid->n(0); ++i)
    for (int j = 0; j < grid->n(1); ++j) {
      const std::size_t p = grid->index(i, j);
      out << i << " " << j << " " << format_double(grid->coordinate(0, p)) << " "
          << format_double(grid->coordinate(1, p));
      for (const auto* v : data) out << " " << format_double((*v)[p]);
      out << "\n";
    }
}

std::vector<NamedField> read_grid_text(std::istream& in, const GridPtr& grid) {
  std::string line;
  int gens = -1;
  bool sized = false;
  std::vector<std::string> labels;
  std::vector<NamedField> fields;
  std::map<std::string, std::size_t> by_name;
  std::vector<Column> columns;
  std::vector<std::vector<double>> values;
  std::vector<bool> seen(grid->size(), false);
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (line[0] == '#') {
      std::string hash, key;
      ss >> hash >> key;
      if (key == "size") {
        int n1 = 0, n2 = 0;
        double L1 = 0.0, L2 = 0.0;
        if (!(ss >> n1 >> n2 >> L1 >> L2)) fail(ErrorCode::config_parse, "malformed size line");
        if (n1 != grid->n(0) || n2 != grid->n(1) || L1 != grid->period(0) || L2 != grid->period(1))
          fail(ErrorCode::shape_mismatch, "file grid differs from the target grid");
        sized = true;
      } else if (key == "generators") {
        if (!(ss >> gens) || gens < 0 || gens > kMaxGenerators)
          fail(ErrorCode::config_parse, "malformed generators line");
      } else if (key == "field") {
        std::string name;
        int t1 = 0, t2 = 0;
        if (!(ss >> name >> t1 >> t2) || gens < 0) fail(ErrorCode::config_parse, "malformed field line");
        by_name[name] = fields.size();
        fields.push_back({name, ScalarField(grid, gens, {t1 != 0, t2 != 0})});
      } else if (key == "columns") {
        std::string label;
        while (ss >> label) labels.push_back(label);
      }
      continue;
    }
    if (!sized || gens < 0 || labels.size() < 4) fail(ErrorCode::config_parse, "data before complete header");
    if (columns.empty() && labels.size() > 4) {
      for (std::size_t c = 4; c < labels.size(); ++c) {
        const auto open = labels[c].find('[');
        if (open == std::string::npos || labels[c].back() != ']')
          fail(ErrorCode::config_parse, "bad column label '" + labels[c] + "'");
        const auto it = by_name.find(labels[c].substr(0, open));
        if (it == by_name.end()) fail(ErrorCode::config_parse, "column for undeclared field '" + labels[c] + "'");
        columns.push_back({it->second, parse_monomial(labels[c].substr(open + 1, labels[c].size() - open - 2), gens)});
      }
      values.assign(columns.size(), std::vector<double>(grid->size(), 0.0));
    }
    int i = -1, j = -1;
    double x1 = 0.0, x2 = 0.0;
    if (!(ss >> i >> j >> x1 >> x2) || i < 0 || j < 0 || i >= grid->n(0) || j >= grid->n(1))
      fail(ErrorCode::config_parse, "bad record '" + line + "'");
    const std::size_t p = grid->index(i, j);
    if (seen[p]) fail(ErrorCode::config_parse, "duplicate record for point " + std::to_string(i) + " " + std::to_string(j));
    seen[p] = true;
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!(ss >> values[c][p])) fail(ErrorCode::config_parse, "short record '" + line + "'");
    std::string extra;
    if (ss >> extra) fail(ErrorCode::config_parse, "long record '" + line + "'");
    ++rows;
  }
  if (rows != grid->size()) fail(ErrorCode::config_parse, "expected one record per grid point");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    ScalarField& f = fields[columns[c].field].field;
    f += ScalarField::monomial(grid, gens, columns[c].mask, std::move(values[c]), Band::unknown(), f.twist());
  }
  return fields;
}

void write_frame_text(std::ostream& out, const FrameField<ScalarField>& frame) {
  std::vector<NamedField> fields;
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu)
      fields.push_back({"e" + std::to_string(k + 1) + std::to_string(mu + 1), frame.e[k][mu]});
  write_grid_text(out, fields);
}

FrameField<ScalarField> read_frame_text(std::istream& in, const GridPtr& grid) {
  const std::vector<NamedField> fields = read_grid_text(in, grid);
  FrameField<ScalarField> frame;
  bool found[2][2] = {{false, false}, {false, false}};
  for (const auto& f : fields) {
    if (f.name.size() != 3 || f.name[0] != 'e' || (f.name[1] != '1' && f.name[1] != '2') ||
        (f.name[2] != '1' && f.name[2] != '2'))
      fail(ErrorCode::config_parse, "unexpected frame component '" + f.name + "'");
    const int k = f.name[1] - '1';
    const int mu = f.name[2] - '1';
    frame.e[k][mu] = f.field;
    found[k][mu] = true;
  }
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu)
      if (!found[k][mu]) fail(ErrorCode::config_parse, "missing frame component");
  return frame;
}

}  // namespace shm
