#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "albench/datasets.hpp"
#include "testutil.hpp"

using namespace albench;
using testutil::write_temp_file;

#ifndef ALBENCH_SOURCE_DIR
#define ALBENCH_SOURCE_DIR "."
#endif

TEST_CASE("load_csv maps labels to contiguous ids by sorted value") {
  std::string path = write_temp_file("mini.csv",
                                     "1.0,2.0,b\n"
                                     "2.0,1.0,a\n"
                                     "0.5,0.5,a\n"
                                     "40,41,b\n");
  // Four rows is below the protocol minimum, so bypass via a 40-row file.
  std::string big;
  for (int i = 0; i < 20; ++i) big += std::to_string(i) + ",1.0,b\n";
  for (int i = 0; i < 20; ++i) big += std::to_string(i) + ",2.0,a\n";
  path = write_temp_file("mini40.csv", big);
  LoadReport report;
  Dataset ds = load_csv(path, {}, &report);
  CHECK(ds.k_classes == 2);
  CHECK(report.label_mapping.size() == 2);
  CHECK(report.label_mapping[0].first == "a");
  CHECK(report.label_mapping[0].second == 0);
  CHECK(report.label_mapping[1].first == "b");
  CHECK(report.label_mapping[1].second == 1);
  CHECK(ds.labels[0] == 1);   // "b" rows first in the file
  CHECK(ds.labels[39] == 0);  // "a" rows last
}

TEST_CASE("load_csv sorts numeric labels numerically") {
  std::string body;
  for (int i = 0; i < 20; ++i) body += "1,1,10\n";
  for (int i = 0; i < 20; ++i) body += "2,2,2\n";
  Dataset ds = load_csv(write_temp_file("numlab.csv", body));
  // 2 sorts before 10 numerically, so label "2" -> 0.
  CHECK(ds.labels[0] == 1);
  CHECK(ds.labels[20] == 0);
}

TEST_CASE("load_csv reads the iris file with table-consistent tags") {
  LoadReport report;
  Dataset ds = load_csv(std::string(ALBENCH_SOURCE_DIR) + "/data/iris.csv", {},
                        &report);
  CHECK(ds.n() == 150);
  CHECK(ds.d() == 4);
  CHECK(ds.k_classes == 3);
  DatasetTags tags = derive_tags(ds);
  CHECK_FALSE(tags.binary);
  CHECK(tags.low_dim);
  CHECK(tags.small_scale);
  CHECK(tags.to_string() == "R+M+LD+SC");
}

TEST_CASE("load_csv rejects a NaN cell with row/column context") {
  std::string body;
  for (int i = 0; i < 39; ++i)
    body += std::to_string(i % 2) + ",1.5," + std::to_string(i % 2) + "\n";
  body += "nan,1.5,0\n";
  try {
    load_csv(write_temp_file("nan.csv", body));
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 40") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
  }
}

TEST_CASE("load_csv rejects single-class files") {
  std::string body;
  for (int i = 0; i < 40; ++i) body += "1,2,0\n";
  CHECK_THROWS_AS(load_csv(write_temp_file("onecls.csv", body)), LoadError);
}

TEST_CASE("load_csv honors header detection and label column override") {
  std::string body = "f1,f2,target\n";
  for (int i = 0; i < 20; ++i) body += "0.5,1,0\n";
  for (int i = 0; i < 20; ++i) body += "1.5,2,1\n";
  Dataset ds = load_csv(write_temp_file("hdr.csv", body));
  CHECK(ds.n() == 40);
  CHECK(ds.d() == 2);

  std::string body2;
  for (int i = 0; i < 20; ++i) body2 += "0,0.5,1\n";
  for (int i = 0; i < 20; ++i) body2 += "1,1.5,2\n";
  CsvSchema schema;
  schema.label_col = 0;
  Dataset ds2 = load_csv(write_temp_file("firstcol.csv", body2), schema);
  CHECK(ds2.d() == 2);
  CHECK(ds2.labels[0] == 0);
  CHECK(ds2.labels[39] == 1);
}

TEST_CASE("gaussian clouds enforce exact class counts") {
  Dataset b = generate_gaussian_clouds(true, 1000, 7);
  Dataset u = generate_gaussian_clouds(false, 1000, 7);
  auto count = [](const Dataset& ds, int cls) {
    Index n = 0;
    for (int y : ds.labels)
      if (y == cls) ++n;
    return n;
  };
  CHECK(count(b, 0) == 500);
  CHECK(count(b, 1) == 500);
  CHECK(count(u, 0) == 800);
  CHECK(count(u, 1) == 200);
  CHECK(b.d() == 2);
}

TEST_CASE("generators are pure functions of (params, seed)") {
  Dataset a = generate_gaussian_clouds(true, 200, 123);
  Dataset b = generate_gaussian_clouds(true, 200, 123);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  Dataset c = generate_gaussian_clouds(true, 200, 124);
  CHECK(a.features != c.features);

  Dataset x1 = generate_xor_checkerboard(200, 9);
  Dataset x2 = generate_xor_checkerboard(200, 9);
  CHECK(x1.features == x2.features);
  CHECK(x1.labels == x2.labels);
}

TEST_CASE("generators reject undersized n") {
  CHECK_THROWS_AS(generate_gaussian_clouds(true, 39, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_xor_checkerboard(10, 1), std::invalid_argument);
}

TEST_CASE("checkerboard labels follow quadrant parity and stay near balance") {
  Dataset ds = generate_xor_checkerboard(1600, 41);
  CHECK(ds.n() == 1600);
  Index ones = 0;
  for (Index i = 0; i < ds.n(); ++i) {
    double x1 = ds.features(static_cast<Eigen::Index>(i), 0);
    double x2 = ds.features(static_cast<Eigen::Index>(i), 1);
    CHECK(x1 >= 0.0);
    CHECK(x1 < 2.0);
    int expected = static_cast<int>(std::floor(x1) + std::floor(x2)) % 2;
    REQUIRE(ds.labels[i] == expected);
    ones += static_cast<Index>(ds.labels[i]);
  }
  double balance = static_cast<double>(ones) / 1600.0;
  CHECK(balance > 0.45);
  CHECK(balance < 0.55);
}

TEST_CASE("make_split partitions with ceil(0.6 n) train rows") {
  Dataset ds = testutil::make_blobs(100, 2.0, 0.5, 5);
  SplitSpec spec;
  spec.trial_seed = 77;
  TrialSplit split = make_split(ds, spec);
  CHECK(split.train_idx.size() == 60);
  CHECK(split.test_idx.size() == 40);
  CHECK(split.initial_labeled_idx.size() == 20);

  TrialSplit again = make_split(ds, spec);
  CHECK(split.train_idx == again.train_idx);
  CHECK(split.test_idx == again.test_idx);
  CHECK(split.initial_labeled_idx == again.initial_labeled_idx);
  CHECK(split.hash() == again.hash());
}

TEST_CASE("make_split bijection audit over seeds") {
  Dataset ds = testutil::make_blobs(83, 2.0, 0.5, 6);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SplitSpec spec;
    spec.trial_seed = seed;
    TrialSplit split = make_split(ds, spec);
    CHECK(split.train_idx.size() == 50);  // ceil(0.6 * 83)
    CHECK(split.test_idx.size() == 33);
    std::set<Index> all(split.train_idx.begin(), split.train_idx.end());
    all.insert(split.test_idx.begin(), split.test_idx.end());
    REQUIRE(all.size() == 83);
    std::set<Index> train(split.train_idx.begin(), split.train_idx.end());
    std::set<int> classes;
    for (Index i : split.initial_labeled_idx) {
      REQUIRE(train.count(i) == 1);
      classes.insert(ds.labels[i]);
    }
    CHECK(classes.size() >= 2);
  }
}

TEST_CASE("make_split keeps 20 initial labels inside a 30-row train side") {
  Dataset ds = testutil::make_blobs(50, 2.0, 0.5, 8);
  SplitSpec spec;
  spec.trial_seed = 3;
  TrialSplit split = make_split(ds, spec);
  CHECK(split.train_idx.size() == 30);
  CHECK(split.initial_labeled_idx.size() == 20);
  std::set<Index> train(split.train_idx.begin(), split.train_idx.end());
  std::set<Index> seen;
  for (Index i : split.initial_labeled_idx) {
    CHECK(train.count(i) == 1);
    CHECK(seen.insert(i).second);
  }
}

TEST_CASE("make_split errors when no 2-class initial pool exists") {
  // 39 of 40 labels identical and one lonely positive in the test side is
  // still solvable, so force failure with n_initial = 2 over a train side
  // that a seed puts all-one-class: use an almost-degenerate dataset.
  Dataset ds = testutil::make_blobs(40, 2.0, 0.5, 11);
  for (Index i = 0; i + 1 < ds.n(); ++i) ds.labels[i] = 0;
  ds.labels[ds.n() - 1] = 1;
  SplitSpec spec;
  spec.n_initial = 20;
  bool saw_error = false;
  for (std::uint64_t seed = 0; seed < 40 && !saw_error; ++seed) {
    spec.trial_seed = seed;
    try {
      make_split(ds, spec);
    } catch (const SplitError&) {
      saw_error = true;  // the lonely positive landed in the test side
    }
  }
  CHECK(saw_error);
}

TEST_CASE("derive_tags matches the table thresholds") {
  auto with_dims = [](Index n, Index d, int k) {
    Dataset ds;
    ds.name = "dims";
    ds.features = Matrix::Zero(static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(d));
    for (Index i = 0; i < n; ++i)
      ds.features(static_cast<Eigen::Index>(i), 0) =
          static_cast<double>(i);  // keep rows distinct
    ds.labels.assign(n, 0);
    for (Index i = 0; i < n; ++i) ds.labels[i] = static_cast<int>(i % k);
    ds.k_classes = k;
    ds.origin = Origin::Real;
    return ds;
  };

  DatasetTags sonar = derive_tags(with_dims(108, 60, 2));
  CHECK(sonar.to_string() == "R+B+HD+SC");
  DatasetTags german = derive_tags(with_dims(1000, 20, 2));
  CHECK(german.to_string() == "R+B+LD+LC");
  CHECK(derive_tags(with_dims(100, 49, 2)).low_dim);
  CHECK_FALSE(derive_tags(with_dims(100, 50, 2)).low_dim);
  CHECK(derive_tags(with_dims(999, 5, 2)).small_scale);
  CHECK_FALSE(derive_tags(with_dims(1000, 5, 2)).small_scale);
}

TEST_CASE("registry resolves csv entries and generator names") {
  std::string dir = testutil::fresh_dir("registry");
  std::string body;
  for (int i = 0; i < 20; ++i) body += "0.5,0\n";
  for (int i = 0; i < 20; ++i) body += "1.5,1\n";
  {
    std::ofstream out(dir + "/tiny.csv");
    out << body;
  }
  std::string reg_path = dir + "/registry.json";
  {
    std::ofstream out(reg_path);
    out << R"([{"name": "tiny", "kind": "csv", "path": "tiny.csv"},
               {"name": "clouds", "kind": "gcloud_balanced", "n": 100}])";
  }
  auto registry = load_registry(reg_path);
  REQUIRE(registry.size() == 2);

  Dataset tiny = resolve_dataset("tiny", registry, dir, 1);
  CHECK(tiny.name == "tiny");
  CHECK(tiny.n() == 40);
  CHECK(tiny.origin == Origin::Real);

  Dataset clouds = resolve_dataset("clouds", registry, dir, 1);
  CHECK(clouds.n() == 100);
  CHECK(clouds.origin == Origin::Synthetic);

  // Generator names stay resolvable without a registry.
  Dataset xor_ds = resolve_dataset("checkerboard", {}, dir, 1);
  CHECK(xor_ds.n() == 1600);
}
