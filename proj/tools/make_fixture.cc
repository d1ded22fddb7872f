// Writes a small synthetic hourly energy/weather CSV pair. Prices depend
// nonlinearly on residual demand, wind and rain. The files contain absent
// hours, blank cells, a duplicated timestamp, a text column and an all-empty
// column.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epf/csv.h"
#include "epf/random.h"
#include "epf/time_table.h"

namespace {

std::string Num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Local time with a fixed +01:00 offset, as in the public files.
std::string LocalStamp(epf::Timestamp utc) {
  const epf::CivilTime c = epf::ToCivil(utc + 3600);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:00:00+01:00", c.year, c.month, c.day,
                c.hour);
  return buf;
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic energy/weather fixture"};
  std::string out_dir = "data/fixture";
  int hours = 500;
  std::uint64_t seed = 7;
  app.add_option("output", out_dir, "Output directory");
  app.add_option("--hours", hours, "Hourly rows")->check(CLI::Range(48, 100000));
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  epf::Rng rng(seed);
  // 2015-01-01 00:00 local = 2014-12-31 23:00 UTC.
  const epf::Timestamp start = epf::FromCivil(2014, 12, 31, 23, 0, 0);
  const std::vector<std::string> cities = {"Valencia", "Madrid", "Bilbao", " Barcelona",
                                           "Seville"};
  const double city_temp[] = {3.0, -1.0, -3.0, 1.5, 5.0};
  const double city_wind[] = {0.8, 0.6, 1.3, 1.0, 0.7};
  const double city_rain[] = {0.6, 0.4, 1.6, 0.9, 0.3};

  std::string energy =
      "time,generation fossil gas,generation nuclear,generation solar,"
      "generation wind onshore,generation hydro pumped storage aggregated,"
      "total load forecast,total load actual,price day ahead,price actual\n";
  std::string weather =
      "dt_iso,city_name,temp,humidity,rain_3h,wind_speed,weather_main\n";

  double wind = 0.5;
  double rain = 0.0;
  double drift = 0.0;
  for (int t = 0; t < hours; ++t) {
    const epf::Timestamp ts = start + static_cast<epf::Timestamp>(t) * 3600;
    const int h = t % 24;  // local hour
    const double day_profile = std::exp(-std::pow(h - 20, 2) / 8.0) +
                               0.6 * std::exp(-std::pow(h - 9, 2) / 6.0);
    wind = std::clamp(wind + 0.08 * rng.Normal() - 0.02 * (wind - 0.5), 0.0, 1.0);
    if (rain > 0.0) {
      rain = rng.Uniform() < 0.15 ? 0.0 : std::max(0.0, rain + 0.3 * rng.Normal());
    } else if (rng.Uniform() < 0.04) {
      rain = 0.5 + 1.5 * rng.Uniform();
    }
    drift += 0.05 * rng.Normal();
    const double temp_base = 9.0 + 5.0 * std::sin(2.0 * M_PI * (h - 9) / 24.0) + drift;

    const double load = 24000.0 + 9000.0 * day_profile + 300.0 * rng.Normal();
    const double solar = h >= 7 && h <= 19
                             ? std::max(0.0, 3000.0 * std::sin(M_PI * (h - 7) / 12.0) +
                                                 50.0 * rng.Normal())
                             : 0.0;
    const double wind_gen = 1000.0 + 9000.0 * wind + 200.0 * rng.Normal();
    const double residual = load - wind_gen - solar;
    const double price = 30.0 + 40.0 * Sigmoid((residual - 17000.0) / 1000.0) +
                         12.0 * day_profile * (1.0 - wind) - 5.0 * std::min(rain, 1.5) +
                         0.25 * std::pow(temp_base - 9.0, 2) + 1.0 * rng.Normal();

    std::vector<std::string> e = {
        LocalStamp(ts),
        Num(residual - 7000.0 + 300.0 * rng.Normal(), 1),
        Num(7000.0 + 100.0 * rng.Normal(), 1),
        Num(solar, 1),
        Num(wind_gen, 1),
        "",
        Num(load + 400.0 * rng.Normal(), 1),
        Num(load, 1),
        Num(0.9 * price + 3.0 + 1.5 * rng.Normal()),
        Num(price)};
    if (t == 50) e[7] = "";
    if (t == 30) {
      // Superseded by the correction written right after it.
      std::vector<std::string> wrong = e;
      wrong[7] = Num(load + 5000.0, 1);
      energy += epf::JoinCsvRow(wrong);
    }
    if (t != 100 && t != 101) energy += epf::JoinCsvRow(e);

    for (std::size_t c = 0; c < cities.size(); ++c) {
      if (cities[c] == "Bilbao" && t >= 200 && t < 204) continue;
      const double temp = temp_base + city_temp[c] + 0.7 * rng.Normal();
      const double humidity = std::clamp(75.0 - 2.0 * (temp - 10.0) + 20.0 * std::min(rain, 1.0) +
                                             4.0 * rng.Normal(),
                                         10.0, 100.0);
      const double city_rain_mm =
          rain > 0.0 ? std::max(0.0, city_rain[c] * rain + 0.1 * rng.Normal()) : 0.0;
      const double wind_speed = std::max(0.0, city_wind[c] * (1.0 + 8.0 * wind) + 0.5 * rng.Normal());
      std::vector<std::string> w = {LocalStamp(ts),
                                    cities[c],
                                    Num(temp + 273.15),
                                    Num(humidity, 0),
                                    Num(city_rain_mm),
                                    Num(wind_speed, 0),
                                    city_rain_mm > 0.0 ? "rain" : "clear"};
      if (cities[c] == "Madrid" && (t == 300 || t == 301)) w[2] = "";
      if (cities[c] == "Valencia" && t == 10) w[4] = "";
      weather += epf::JoinCsvRow(w);
    }
  }

  const std::filesystem::path dir(out_dir);
  epf::WriteFileAtomic(dir / "energy.csv", energy);
  epf::WriteFileAtomic(dir / "weather.csv", weather);
  std::cout << "wrote " << (dir / "energy.csv").string() << " and "
            << (dir / "weather.csv").string() << "\n";
  return 0;
}
