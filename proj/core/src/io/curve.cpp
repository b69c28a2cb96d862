#include "dogsplat/io/curve.hpp"

#include "dogsplat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace dogsplat {

namespace {

constexpr std::pair<CurveEvent, const char*> kEvents[] = {
    {CurveEvent::None, "none"},       {CurveEvent::Eval, "eval"},       {CurveEvent::Prune, "prune"},
    {CurveEvent::ActivateDoG, "activate_dog"}, {CurveEvent::Degrade, "degrade"}, {CurveEvent::Finish, "finish"}};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_integer(const std::string& s, std::size_t line) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + s + "'", line);
  return v;
}

double parse_real(const std::string& s, std::size_t line) {
  // strtod accepts inf/nan, which from_chars in older libstdc++ lacks for double
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'", line);
  return v;
}

}  // namespace

const char* curve_event_name(CurveEvent event) {
  for (const auto& [e, name] : kEvents)
    if (e == event) return name;
  return "none";
}

CurveEvent parse_curve_event(const std::string& token) {
  for (const auto& [e, name] : kEvents)
    if (token == name) return e;
  throw ParseError("unknown curve event '" + token + "'", 0);
}

std::string format_curve_row(const CurveRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%zu,%zu,%.17g,%.17g,%s", row.iter, row.n_primitives, row.n_dog, row.l1,
                row.psnr, curve_event_name(row.event));
  return buf;
}

struct CurveWriter::Impl {
  std::ofstream out;
};

CurveWriter::CurveWriter(const std::string& path) : impl_(new Impl) {
  bool fresh = true;
  {
    std::ifstream probe(path);
    fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  }
  impl_->out.open(path, std::ios::app);
  if (!impl_->out) {
    delete impl_;
    throw IoError("cannot open " + path);
  }
  if (fresh) impl_->out << kCurveHeader << '\n' << std::flush;
}

CurveWriter::~CurveWriter() { delete impl_; }

void CurveWriter::append(const CurveRow& row) { impl_->out << format_curve_row(row) << '\n' << std::flush; }

void write_curve(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kCurveHeader << '\n';
  for (const auto& r : rows) out << format_curve_row(r) << '\n';
}

void write_curve(const std::string& path, const std::vector<CurveRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path);
  write_curve(out, rows);
  if (!out) throw IoError("write failed: " + path);
}

std::vector<CurveRow> read_curve(std::istream& in) {
  std::vector<CurveRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header", 1);
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCurveHeader) throw ParseError("line 1: unexpected header", 1);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6)
      throw ParseError("line " + std::to_string(lineno) + ": expected 6 fields", lineno);
    CurveRow r;
    r.iter = parse_integer<long long>(f[0], lineno);
    r.n_primitives = parse_integer<std::size_t>(f[1], lineno);
    r.n_dog = parse_integer<std::size_t>(f[2], lineno);
    r.l1 = parse_real(f[3], lineno);
    r.psnr = parse_real(f[4], lineno);
    try {
      r.event = parse_curve_event(f[5]);
    } catch (const ParseError&) {
      throw ParseError("line " + std::to_string(lineno) + ": unknown event '" + f[5] + "'", lineno);
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<CurveRow> read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_curve(in);
}

std::string curve_svg(const std::vector<CurveRow>& rows) {
  if (rows.empty()) throw EmptyDataset("curve log has no rows");
  constexpr double W = 640, H = 360, left = 60, right = 60, top = 20, bottom = 40;
  const double x0 = static_cast<double>(rows.front().iter);
  const double x1 = std::max(static_cast<double>(rows.back().iter), x0 + 1.0);
  double cmax = 1.0, pmin = 1e300, pmax = -1e300;
  for (const auto& r : rows) {
    cmax = std::max(cmax, static_cast<double>(r.n_primitives));
    pmin = std::min(pmin, r.psnr);
    pmax = std::max(pmax, r.psnr);
  }
  if (pmax <= pmin) pmax = pmin + 1.0;
  auto px = [&](double it) { return left + (it - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double v, double lo, double hi) { return H - bottom - (v - lo) / (hi - lo) * (H - top - bottom); };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << W - right << "\" y1=\"" << top << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">iteration</text>\n";
  s << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
    << ")\" text-anchor=\"middle\" fill=\"steelblue\">primitives (max " << cmax << ")</text>\n";
  s << "<text x=\"" << W - 14 << "\" y=\"" << H / 2 << "\" transform=\"rotate(90 " << W - 14 << " " << H / 2
    << ")\" text-anchor=\"middle\" fill=\"firebrick\">PSNR dB (" << pmin << " to " << pmax << ")</text>\n";

  s << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  for (const auto& r : rows) s << px(static_cast<double>(r.iter)) << ',' << py(static_cast<double>(r.n_primitives), 0.0, cmax) << ' ';
  s << "\"/>\n";
  s << "<polyline fill=\"none\" stroke=\"firebrick\" points=\"";
  for (const auto& r : rows) s << px(static_cast<double>(r.iter)) << ',' << py(r.psnr, pmin, pmax) << ' ';
  s << "\"/>\n</svg>\n";
  return s.str();
}

}  // namespace dogsplat
