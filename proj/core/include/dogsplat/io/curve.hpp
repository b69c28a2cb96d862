#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace dogsplat {

enum class CurveEvent { None, Eval, Prune, ActivateDoG, Degrade, Finish };

const char* curve_event_name(CurveEvent event);
/// Throws ParseError for an unknown token.
CurveEvent parse_curve_event(const std::string& token);

struct CurveRow {
  long long iter = 0;
  std::size_t n_primitives = 0;
  std::size_t n_dog = 0;
  double l1 = 0.0;
  double psnr = 0.0;
  CurveEvent event = CurveEvent::None;

  bool operator==(const CurveRow&) const = default;
};

inline constexpr const char* kCurveHeader = "iter,n_primitives,n_dog,l1,psnr,event";

/// Appends rows to a CSV file, writing the header first when the file is
/// new. Every row is flushed.
class CurveWriter {
 public:
  explicit CurveWriter(const std::string& path);
  ~CurveWriter();
  CurveWriter(const CurveWriter&) = delete;
  CurveWriter& operator=(const CurveWriter&) = delete;

  void append(const CurveRow& row);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_curve_row(const CurveRow& row);
void write_curve(std::ostream& out, const std::vector<CurveRow>& rows);
void write_curve(const std::string& path, const std::vector<CurveRow>& rows);
/// Throws ParseError naming the offending line.
std::vector<CurveRow> read_curve(std::istream& in);
std::vector<CurveRow> read_curve(const std::string& path);

/// Two-series (primitive count, PSNR) line plot over iterations. Throws
/// EmptyDataset when there are no rows.
std::string curve_svg(const std::vector<CurveRow>& rows);

}  // namespace dogsplat
