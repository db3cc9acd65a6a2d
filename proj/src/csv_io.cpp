#include "pcrfle/csv_io.hpp"

#include "pcrfle/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pcrfle::io {

std::string format_double(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  for (auto &c : cells) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

double parse_cell(const std::string &cell, const std::filesystem::path &path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw InvalidInput(path.string() + ":" + std::to_string(line) + ": '" + cell + "' is not a number");
  return v;
}

} // namespace

void write_samples(const std::filesystem::path &path, const SampleSet &samples) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < samples.dim(); ++k)
    out << (k ? "," : "") << "x" << k + 1;
  if (samples.has_responses())
    out << ",y";
  out << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t k = 0; k < samples.dim(); ++k)
      out << (k ? "," : "")
          << format_double(samples.points()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    if (samples.has_responses())
      out << ',' << format_double(samples.responses()(static_cast<Eigen::Index>(i)));
    out << '\n';
  }
  finish(out, path);
}

SampleSet read_samples(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    header = split_csv(line);
    break;
  }
  if (header.empty())
    throw InvalidInput(path.string() + ": missing header row");
  const bool has_y = header.back() == "y";
  const std::size_t dim = header.size() - (has_y ? 1 : 0);
  if (dim == 0)
    throw InvalidInput(path.string() + ": no coordinate columns");

  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
    std::vector<double> row;
    for (std::size_t k = 0; k < dim; ++k)
      row.push_back(parse_cell(cells[k], path, line_no));
    rows.push_back(std::move(row));
    if (has_y)
      ys.push_back(parse_cell(cells.back(), path, line_no));
  }
  return SampleSet::from_rows(rows, has_y ? std::optional<std::vector<double>>(ys) : std::nullopt);
}

void write_eigensystem(const std::filesystem::path &path, const EigenSystem &eig) {
  auto out = open_out(path);
  out << "index,eigenvalue";
  for (std::size_t i = 0; i < eig.size(); ++i)
    out << ",v" << i + 1;
  out << '\n';
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(eig.count()); ++c) {
    out << c + 1 << ',' << format_double(eig.values(c));
    for (Eigen::Index r = 0; r < eig.vectors.rows(); ++r)
      out << ',' << format_double(eig.vectors(r, c));
    out << '\n';
  }
  finish(out, path);
}

void write_fit(const std::filesystem::path &path, const SampleSet &samples, const RegressionFit &fit,
               const std::vector<std::pair<std::string, std::string>> &metadata) {
  auto out = open_out(path);
  for (const auto &[key, value] : metadata)
    out << "# " << key << '=' << value << '\n';
  out << "index";
  for (std::size_t k = 0; k < samples.dim(); ++k)
    out << ",x" << k + 1;
  out << ",y,fitted\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    out << i;
    for (std::size_t k = 0; k < samples.dim(); ++k)
      out << ',' << format_double(samples.points()(row, static_cast<Eigen::Index>(k)));
    out << ',' << format_double(samples.responses()(row)) << ',' << format_double(fit.fitted(row)) << '\n';
  }
  finish(out, path);
}

void write_records(const std::filesystem::path &path, const ExperimentReport &report) {
  auto out = open_out(path);
  out << "n,rep,K,epsilon,mse\n";
  for (const auto &r : report.records)
    out << r.n << ',' << r.rep << ',' << r.K << ',' << format_double(r.epsilon) << ',' << format_double(r.mse)
        << '\n';
  finish(out, path);
}

void write_summary(const std::filesystem::path &path, const ExperimentReport &report) {
  auto out = open_out(path);
  out << "n,mean_mse,fitted_slope,theoretical_slope\n";
  for (std::size_t i = 0; i < report.n_values.size(); ++i)
    out << report.n_values[i] << ',' << format_double(report.mean_mse_per_n[i]) << ','
        << format_double(report.fitted_slope) << ',' << format_double(report.theoretical_slope) << '\n';
  finish(out, path);
}

void write_curve(const std::filesystem::path &path, const FitCurve &curve) {
  auto out = open_out(path);
  out << "x,truth,mean_fit\n";
  for (std::size_t g = 0; g < curve.x.size(); ++g) {
    out << format_double(curve.x[g]) << ',' << format_double(curve.truth[g]) << ',';
    if (!curve.missing[g])
      out << format_double(curve.mean_fit[g]);
    out << '\n';
  }
  finish(out, path);
}

void write_grid(const std::filesystem::path &path, const GridSearchResult &grid) {
  auto out = open_out(path);
  out << "K,epsilon,mse\n";
  for (const auto &c : grid.cells)
    out << c.K << ',' << format_double(c.epsilon) << ',' << format_double(c.mse) << '\n';
  finish(out, path);
}

void write_refinements(const std::filesystem::path &path, const SeminormResult &result) {
  auto out = open_out(path);
  out << "level,cells,raw,extrapolated\n";
  for (std::size_t i = 0; i < result.refinements.size(); ++i) {
    const std::size_t side = std::size_t{1} << result.levels[i];
    out << result.levels[i] << ',' << side * side << ',' << format_double(result.refinements[i]) << ','
        << format_double(result.extrapolated[i]) << '\n';
  }
  finish(out, path);
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace pcrfle::io
