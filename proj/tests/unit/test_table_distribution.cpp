#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "optpay/distribution.hpp"
#include "optpay/errors.hpp"
#include "optpay/normal.hpp"
#include "optpay/table.hpp"

using namespace optpay;

TEST(Table, CsvRoundTripWithQuotingAndNotes) {
    Table t({"name", "value"});
    t.add_note("seed=1");
    t.add_row({std::string("a,b \"q\""), 1.25});
    t.add_row({std::string("plain"), 1e-300});
    std::stringstream ss;
    write_csv(ss, t);
    const Table back = read_csv(ss);
    EXPECT_EQ(back.columns(), t.columns());
    EXPECT_EQ(back.notes(), t.notes());
    EXPECT_EQ(back.text(0, "name"), "a,b \"q\"");
    EXPECT_EQ(back.number(0, "value"), 1.25);
    EXPECT_EQ(back.number(1, "value"), 1e-300);
}

TEST(Table, JsonRoundTripTwelveDigits) {
    Table t({"x", "label"});
    t.add_row({M_PI, std::string("pi")});
    std::stringstream ss;
    write_json(ss, t);
    const Table back = read_json(ss);
    EXPECT_NEAR(back.number(0, "x"), M_PI, 1e-11);
    EXPECT_EQ(back.text(0, "label"), "pi");
    EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Table, RowWidthChecked) {
    Table t({"a", "b"});
    EXPECT_THROW(t.add_row({1.0}), DomainError);
}

TEST(Dist1D, LognormalMedianAndInverse) {
    const auto d = Dist1D::lognormal(std::log(100.0), 0.3);
    EXPECT_NEAR(d.quantile(0.5), 100.0, 1e-10);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(20.0, 400.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen);
        ASSERT_NEAR(d.quantile(d.cdf(x)), x, 1e-8 * x);
    }
    EXPECT_THROW(d.quantile(0.0), DomainError);
}

TEST(Dist1D, EmpiricalFromLognormalSamples) {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> n01;
    std::vector<double> x(1'000'000);
    for (auto& v : x) v = std::exp(std::log(100.0) + 0.3 * n01(gen));
    const auto emp = Dist1D::from_samples(x, 5000);
    const double exact = 100.0 * std::exp(0.3 * norm_quantile(0.9));
    EXPECT_NEAR(emp.quantile(0.9), exact, 0.005 * exact);
}

TEST(Dist1D, PointMassAndGridSemantics) {
    const auto pm = Dist1D::from_samples({3.0, 3.0, 3.0});
    EXPECT_TRUE(pm.is_point_mass());
    EXPECT_EQ(pm.quantile(0.3), 3.0);
    const auto g = Dist1D::empirical({1.0, 2.0, 4.0}, {0.2, 0.6, 0.9});
    EXPECT_EQ(g.cdf(0.5), 0.0);
    EXPECT_NEAR(g.cdf(3.0), 0.75, 1e-15);
    EXPECT_EQ(g.cdf(4.0), 1.0);
    EXPECT_THROW(Dist1D::empirical({2.0, 1.0}, {0.5, 0.9}), DomainError);
    EXPECT_THROW(Dist1D::empirical({1.0, 2.0}, {0.5, 1.0}), DomainError);
}

TEST(Dist1D, CsvRoundTrip) {
    const auto g = Dist1D::empirical({1.0, 2.0, 4.0}, {0.2, 0.6, 0.9});
    std::stringstream ss;
    write_dist_csv(ss, g);
    const auto back = read_dist_csv(ss);
    for (double p : {0.25, 0.5, 0.9}) EXPECT_NEAR(back.quantile(p), g.quantile(p), 1e-12);
}
