#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "milsent/corpus.hpp"

namespace milsent {

struct PriceObservation {
  Date date;
  double close = 0.0;
};

/// Closing prices with strictly increasing dates and positive prices.
class PriceSeries {
 public:
  PriceSeries() = default;
  PriceSeries(std::string ticker, std::vector<PriceObservation> observations);

  const std::string& ticker() const { return ticker_; }
  std::span<const PriceObservation> observations() const { return observations_; }
  std::size_t size() const { return observations_.size(); }

 private:
  std::string ticker_;
  std::vector<PriceObservation> observations_;
};

/// `date,close` CSV with a header row.
PriceSeries read_price_series(std::istream& in, std::string ticker, std::string_view source = "<stream>");
PriceSeries load_price_series(const std::filesystem::path& path, std::string ticker);
/// Every `*.csv` in `dir`, keyed by file stem (the ticker).
std::map<std::string, PriceSeries> load_price_directory(const std::filesystem::path& dir);

struct DatedReturn {
  Date date;
  double value = 0.0;
};

/// r_t = p_t / p_{t-1} - 1, dated at t.
std::vector<DatedReturn> simple_returns(const PriceSeries& series);

struct MarketModel {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t window = 30;
};

/// OLS of stock on market returns over the `window` common trading days
/// immediately before `event_date`. Throws DataError on short history or a
/// constant market return.
MarketModel fit_market_model(std::span<const DatedReturn> stock_returns,
                             std::span<const DatedReturn> market_returns, Date event_date,
                             std::size_t window = 30);

constexpr double abnormal_return(const MarketModel& model, double stock_return, double market_return) {
  return stock_return - (model.alpha + model.beta * market_return);
}

struct EventLabelConfig {
  std::size_t window = 30;
  double penny_threshold = 1.0;
  double outlier_level = 0.01;  // trimmed per tail

  void validate() const;
};

struct DroppedDocument {
  std::string id;
  std::string reason;
};

struct LabelingResult {
  Corpus labeled;
  std::vector<DroppedDocument> dropped;
  std::size_t penny_dropped = 0;
  std::size_t zero_return_dropped = 0;
  std::size_t outlier_dropped = 0;
  std::size_t data_dropped = 0;
};

/// Event-day abnormal return and sign label per document. Filters, in order:
/// missing/insufficient market data, penny stocks (prior-day close), zero AR,
/// then symmetric trimming of ceil(outlier_level * n) documents per AR tail.
LabelingResult label_documents(std::span<const Document> corpus,
                               const std::map<std::string, PriceSeries>& stock_prices,
                               const PriceSeries& index_prices, const EventLabelConfig& config);

}  // namespace milsent
