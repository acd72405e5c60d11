#include "milsent/eventstudy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "milsent/error.hpp"

namespace milsent {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct ReturnPair {
  Date date;
  double stock = 0.0;
  double market = 0.0;
};

// Inner join on date; both inputs are date-ordered.
std::vector<ReturnPair> join_returns(std::span<const DatedReturn> stock,
                                     std::span<const DatedReturn> market) {
  std::vector<ReturnPair> out;
  std::size_t i = 0, j = 0;
  while (i < stock.size() && j < market.size()) {
    if (stock[i].date < market[j].date) {
      ++i;
    } else if (market[j].date < stock[i].date) {
      ++j;
    } else {
      out.push_back({stock[i].date, stock[i].value, market[j].value});
      ++i;
      ++j;
    }
  }
  return out;
}

MarketModel ols(std::span<const ReturnPair> pairs, std::size_t window) {
  const auto n = static_cast<double>(pairs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : pairs) {
    mean_x += p.market;
    mean_y += p.stock;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, sum_sq = 0.0;
  for (const auto& p : pairs) {
    const double dx = p.market - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.stock - mean_y);
    sum_sq += p.market * p.market;
  }
  if (!(sxx > 1e-12 * sum_sq) || sxx == 0.0) {
    throw DataError("market returns have zero variance over the estimation window");
  }
  MarketModel model;
  model.beta = sxy / sxx;
  model.alpha = mean_y - model.beta * mean_x;
  model.window = window;
  return model;
}

}  // namespace

PriceSeries::PriceSeries(std::string ticker, std::vector<PriceObservation> observations)
    : ticker_(std::move(ticker)), observations_(std::move(observations)) {
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    if (!(observations_[i].close > 0.0) || !std::isfinite(observations_[i].close)) {
      throw DataError("price series '" + ticker_ + "' has a non-positive price on " +
                      format_date(observations_[i].date));
    }
    if (i > 0 && !(observations_[i - 1].date < observations_[i].date)) {
      throw DataError("price series '" + ticker_ + "' dates are not strictly increasing at " +
                      format_date(observations_[i].date));
    }
  }
}

PriceSeries read_price_series(std::istream& in, std::string ticker, std::string_view source) {
  std::vector<PriceObservation> obs;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    auto fail = [&](const std::string& what) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": " << what;
      throw DataError(msg.str());
    };
    const auto comma = row.find(',');
    if (comma == std::string::npos) fail("expected 'date,close'");
    const std::string date_field = trim(std::string_view(row).substr(0, comma));
    const std::string close_field = trim(std::string_view(row).substr(comma + 1));
    if (!header_seen) {
      header_seen = true;
      if (date_field != "date" || close_field != "close") fail("header row must be 'date,close'");
      continue;
    }
    PriceObservation o;
    try {
      o.date = parse_date(date_field);
    } catch (const DataError& e) {
      fail(e.what());
    }
    auto [ptr, ec] = std::from_chars(close_field.data(), close_field.data() + close_field.size(), o.close);
    if (ec != std::errc{} || ptr != close_field.data() + close_field.size()) {
      fail("invalid price '" + close_field + "'");
    }
    obs.push_back(o);
  }
  if (!header_seen) throw DataError(std::string(source) + ": missing header row");
  try {
    return PriceSeries(std::move(ticker), std::move(obs));
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
}

PriceSeries load_price_series(const std::filesystem::path& path, std::string ticker) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price file '" + path.string() + "'");
  return read_price_series(in, std::move(ticker), path.string());
}

std::map<std::string, PriceSeries> load_price_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("price directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, PriceSeries> out;
  for (const auto& f : files) {
    const std::string ticker = f.stem().string();
    out.emplace(ticker, load_price_series(f, ticker));
  }
  return out;
}

std::vector<DatedReturn> simple_returns(const PriceSeries& series) {
  const auto obs = series.observations();
  if (obs.size() < 2) {
    throw DataError("price series '" + series.ticker() + "' needs at least 2 observations");
  }
  std::vector<DatedReturn> out;
  out.reserve(obs.size() - 1);
  for (std::size_t t = 1; t < obs.size(); ++t) {
    out.push_back({obs[t].date, obs[t].close / obs[t - 1].close - 1.0});
  }
  return out;
}

MarketModel fit_market_model(std::span<const DatedReturn> stock_returns,
                             std::span<const DatedReturn> market_returns, Date event_date,
                             std::size_t window) {
  if (window < 2) throw ConfigError("estimation window must be at least 2");
  const auto pairs = join_returns(stock_returns, market_returns);
  const auto end = std::lower_bound(pairs.begin(), pairs.end(), event_date,
                                    [](const ReturnPair& p, Date d) { return p.date < d; });
  const auto available = static_cast<std::size_t>(end - pairs.begin());
  if (available < window) {
    throw DataError("insufficient history: " + std::to_string(available) + " of " +
                    std::to_string(window) + " estimation-window returns before " +
                    format_date(event_date));
  }
  return ols(std::span(pairs).subspan(available - window, window), window);
}

void EventLabelConfig::validate() const {
  if (window < 2) throw ConfigError("window must be at least 2");
  if (!(outlier_level >= 0.0 && outlier_level < 0.5)) throw ConfigError("outlier_level must lie in [0, 0.5)");
  if (!(penny_threshold >= 0.0)) throw ConfigError("penny_threshold must be non-negative");
}

LabelingResult label_documents(std::span<const Document> corpus,
                               const std::map<std::string, PriceSeries>& stock_prices,
                               const PriceSeries& index_prices, const EventLabelConfig& config) {
  config.validate();
  LabelingResult result;
  const auto market = simple_returns(index_prices);

  std::map<std::string, std::vector<DatedReturn>> stock_returns;
  struct Candidate {
    std::size_t index;
    double ar;
  };
  std::vector<Candidate> candidates;

  auto drop = [&](const Document& doc, std::string reason, std::size_t& counter) {
    result.dropped.push_back({doc.id, std::move(reason)});
    ++counter;
  };

  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Document& doc = corpus[k];
    auto series_it = stock_prices.find(doc.ticker);
    if (series_it == stock_prices.end()) {
      drop(doc, "no price series for ticker '" + doc.ticker + "'", result.data_dropped);
      continue;
    }
    const PriceSeries& series = series_it->second;
    if (series.size() < 2) {
      drop(doc, "price series for '" + doc.ticker + "' is too short", result.data_dropped);
      continue;
    }
    auto [ret_it, inserted] = stock_returns.try_emplace(doc.ticker);
    if (inserted) ret_it->second = simple_returns(series);
    const auto pairs = join_returns(ret_it->second, market);

    // Event day: first common trading day on or after publication.
    const auto event = std::lower_bound(pairs.begin(), pairs.end(), doc.published_at,
                                        [](const ReturnPair& p, Date d) { return p.date < d; });
    if (event == pairs.end()) {
      drop(doc, "no trading day on or after " + format_date(doc.published_at), result.data_dropped);
      continue;
    }
    const auto available = static_cast<std::size_t>(event - pairs.begin());
    if (available < config.window) {
      drop(doc, "insufficient estimation window (" + std::to_string(available) + " of " +
                    std::to_string(config.window) + " days)",
           result.data_dropped);
      continue;
    }
    MarketModel model;
    try {
      model = ols(std::span(pairs).subspan(available - config.window, config.window), config.window);
    } catch (const DataError& e) {
      drop(doc, e.what(), result.data_dropped);
      continue;
    }

    const auto obs = series.observations();
    const auto event_obs = std::lower_bound(
        obs.begin(), obs.end(), event->date,
        [](const PriceObservation& o, Date d) { return o.date < d; });
    const double prior_close = std::prev(event_obs)->close;
    if (prior_close < config.penny_threshold) {
      drop(doc, "penny stock (prior-day close " + std::to_string(prior_close) + ")",
           result.penny_dropped);
      continue;
    }

    const double ar = abnormal_return(model, event->stock, event->market);
    if (!std::isfinite(ar)) {
      drop(doc, "non-finite abnormal return", result.data_dropped);
      continue;
    }
    if (ar == 0.0) {
      drop(doc, "zero abnormal return", result.zero_return_dropped);
      continue;
    }
    candidates.push_back({k, ar});
  }

  const std::size_t n = candidates.size();
  const auto per_tail =
      static_cast<std::size_t>(std::ceil(config.outlier_level * static_cast<double>(n) - 1e-9));
  std::vector<bool> keep(n, true);
  if (per_tail > 0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (candidates[a].ar != candidates[b].ar) return candidates[a].ar < candidates[b].ar;
      return corpus[candidates[a].index].id < corpus[candidates[b].index].id;
    });
    for (std::size_t r = 0; r < n; ++r) {
      if (r < per_tail || r >= n - std::min(n, per_tail)) keep[order[r]] = false;
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    const Document& doc = corpus[candidates[c].index];
    if (!keep[c]) {
      drop(doc, "abnormal-return outlier", result.outlier_dropped);
      continue;
    }
    Document labeled = doc;
    labeled.abnormal_return = candidates[c].ar;
    labeled.label = candidates[c].ar > 0.0 ? Polarity::positive : Polarity::negative;
    result.labeled.push_back(std::move(labeled));
  }
  return result;
}

}  // namespace milsent
