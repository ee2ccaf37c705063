#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "newsrank/error.hpp"
#include "newsrank/ranking.hpp"
#include "newsrank/rng.hpp"

using namespace newsrank;

namespace {

const Timestamp kRef = parse_iso8601("2014-05-10T12:00:00Z");

Corpus tiny_corpus() {
    std::vector<NewsItem> items;
    auto add = [&](const std::string& id, Timestamp pub, std::optional<std::int64_t> count) {
        NewsItem it;
        it.id = id;
        it.title = "title " + id;
        it.headline = "headline " + id;
        it.pub_ts = pub;
        it.n_tweets_2d = count;
        items.push_back(it);
    };
    add("a", kRef - 3 * 86400, 474);   // OLD (3 days)
    add("b", kRef - 3600, 398);        // NEW (1 hour)
    add("c", kRef - kTwoDays, 299);    // exactly 2 days -> OLD
    add("d", kRef - 90000, 283);       // NEW (25h)
    add("e", kRef - 4 * 86400, std::nullopt);  // OLD, unknown count
    Snapshot snap;
    snap.ts = kRef;
    snap.ranked_ids = {"b", "a", "d", "c", "e"};
    return Corpus(std::move(items), {snap}, "tiny");
}

}  // namespace

TEST_CASE("pool split by the two-day rule") {
    const Corpus corpus = tiny_corpus();
    const NewsPool pool = build_pool(corpus.snapshots()[0], corpus, kRef);
    CHECK(pool.size() == 5);
    CHECK(pool.old_ids() == std::vector<std::string>{"a", "c", "e"});
    CHECK(pool.new_ids() == std::vector<std::string>{"b", "d"});
    CHECK(pool.old_ids().size() + pool.new_ids().size() == pool.size());

    const NewsPool known = filter_known(pool, corpus);
    CHECK(known.size() == 4);  // "e" dropped

    Snapshot bad;
    bad.ts = kRef;
    bad.ranked_ids = {"zz"};
    CHECK_THROWS_AS(build_pool(bad, corpus, kRef), Error);
}

TEST_CASE("ground truth ordering follows observed counts") {
    const Corpus corpus = tiny_corpus();
    const NewsPool pool = filter_known(build_pool(corpus.snapshots()[0], corpus, kRef), corpus);
    const RankedList truth = ground_truth_rank(pool, corpus);
    REQUIRE(truth.size() == 4);
    CHECK(truth.entries[0].id == "a");  // 474
    CHECK(truth.entries[1].id == "b");  // 398
    CHECK(truth.entries[2].id == "c");  // 299
    CHECK(truth.entries[3].id == "d");  // 283
    CHECK(truth.entries[0].score == 474.0);

    SUBCASE("unknown counts must be filtered upstream") {
        const NewsPool raw = build_pool(corpus.snapshots()[0], corpus, kRef);
        CHECK_THROWS_AS(ground_truth_rank(raw, corpus), Error);
    }
    SUBCASE("equal counts break by earlier publication") {
        std::vector<NewsItem> items;
        NewsItem x;
        x.id = "x";
        x.title = x.headline = "x";
        x.pub_ts = kRef - 7200;
        x.n_tweets_2d = 100;
        NewsItem y = x;
        y.id = "y";
        y.pub_ts = kRef - 9600;  // earlier
        items = {x, y};
        const Corpus c2(std::move(items), {}, "t");
        NewsPool p2;
        p2.ids = {"x", "y"};
        p2.is_old = {false, false};
        p2.ref_time = kRef;
        const RankedList t2 = ground_truth_rank(p2, c2);
        CHECK(t2.entries[0].id == "y");
    }
    SUBCASE("single item ranks first") {
        NewsPool p;
        p.ids = {"a"};
        p.is_old = {true};
        p.ref_time = kRef;
        CHECK(ground_truth_rank(p, corpus).entries[0].id == "a");
    }
}

TEST_CASE("decay substitutions") {
    CHECK(decay(100.0, 1) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(decay(100.0, 49) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(decay(96.0, 96) == doctest::Approx(1.0).epsilon(1e-12));       // factor 1/96
    CHECK(decay(1.0, 96) == doctest::Approx(1.0 / 96.0).epsilon(1e-12));
    CHECK(decay(1.0, 200) == doctest::Approx(1.0 / 96.0).epsilon(1e-12));  // capped at t_f
    CHECK(decay(7.0, 1, 10) == 7.0);
    CHECK_THROWS_AS(decay(1.0, 0), Error);

    SUBCASE("linear in base, strictly decreasing in t") {
        Rng rng(3);
        for (int i = 0; i < 200; ++i) {
            const double base = rng.next_unit() * 500.0;
            const int t = 1 + static_cast<int>(rng.below(95));
            CHECK(decay(2.0 * base, t) == doctest::Approx(2.0 * decay(base, t)));
            CHECK(decay(base + 1.0, t) > decay(base, t) - 1e-12);
            if (base > 0) CHECK(decay(base, t + 1) < decay(base, t));
        }
    }
}

TEST_CASE("fusion hand example") {
    RankedList gn;
    gn.kind = RankKind::OFFICIAL;
    gn.entries = {{"A", 3.0}, {"B", 2.0}, {"C", 1.0}};
    RankedList pr;
    pr.kind = RankKind::PREDICTED;
    pr.entries = {{"B", 30.0}, {"C", 20.0}, {"A", 10.0}};

    SUBCASE("agreement keys: A:2, B:1.5, C:2.5") {
        const RankedList fused = fuse(gn, pr, FuseStrategy::AGREEMENT);
        REQUIRE(fused.size() == 3);
        CHECK(fused.entries[0].id == "B");
        CHECK(fused.entries[1].id == "A");
        CHECK(fused.entries[2].id == "C");
        CHECK(fused.entries[0].score == doctest::Approx(1.5));
        CHECK(fused.entries[1].score == doctest::Approx(2.0));
        CHECK(fused.entries[2].score == doctest::Approx(2.5));
    }
    SUBCASE("poll keys: A:1, B:1, C:2; tie goes to the higher predicted score") {
        const RankedList fused = fuse(gn, pr, FuseStrategy::POLL);
        REQUIRE(fused.size() == 3);
        CHECK(fused.entries[0].id == "B");  // pred score 30 beats A's 10
        CHECK(fused.entries[1].id == "A");
        CHECK(fused.entries[2].id == "C");
    }
    SUBCASE("fusing a rank with itself is the identity") {
        for (FuseStrategy s : {FuseStrategy::AGREEMENT, FuseStrategy::POLL}) {
            const RankedList fused = fuse(pr, pr, s);
            for (std::size_t i = 0; i < pr.size(); ++i)
                CHECK(fused.entries[i].id == pr.entries[i].id);
        }
    }
    SUBCASE("id-set mismatch is reported with the symmetric difference") {
        RankedList other = pr;
        other.entries[2].id = "Z";
        CHECK_THROWS_WITH_AS(fuse(gn, other, FuseStrategy::POLL), doctest::Contains("Z"),
                             Error);
    }
}

TEST_CASE("fusion depends on positions only") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        RankedList a, b;
        a.kind = RankKind::OFFICIAL;
        b.kind = RankKind::PREDICTED;
        std::vector<std::string> ids;
        for (int i = 0; i < 12; ++i) ids.push_back("n" + std::to_string(i));
        std::vector<std::string> perm = ids;
        rng.shuffle(perm);
        double score = 1000.0;
        for (const std::string& id : ids) a.entries.push_back({id, score -= 1.0});
        score = 500.0;
        for (const std::string& id : perm) b.entries.push_back({id, score -= 2.0});

        const RankedList f1 = fuse(a, b, FuseStrategy::AGREEMENT);
        // strictly increasing transform of the scores behind both ranks
        for (auto* list : {&a, &b})
            for (RankedEntry& e : list->entries) e.score = e.score * 3.0 + 7.0;
        const RankedList f2 = fuse(a, b, FuseStrategy::AGREEMENT);
        for (std::size_t i = 0; i < f1.size(); ++i) CHECK(f1.entries[i].id == f2.entries[i].id);
    }
}

TEST_CASE("baseline time orders by recency") {
    const Corpus corpus = tiny_corpus();
    const NewsPool pool = filter_known(build_pool(corpus.snapshots()[0], corpus, kRef), corpus);
    const RankedList bt = baseline_time(pool, corpus);
    REQUIRE(bt.size() == 4);
    CHECK(bt.entries[0].id == "b");  // 1 hour old
    CHECK(bt.entries[1].id == "d");  // 25 hours
    CHECK(bt.entries[2].id == "c");  // 2 days
    CHECK(bt.entries[3].id == "a");  // 3 days

    SUBCASE("equal pub times break by id") {
        std::vector<NewsItem> items;
        for (const char* id : {"m", "k"}) {
            NewsItem it;
            it.id = id;
            it.title = it.headline = id;
            it.pub_ts = kRef - 100;
            it.n_tweets_2d = 5;
            items.push_back(it);
        }
        const Corpus c2(std::move(items), {}, "t");
        NewsPool p;
        p.ids = {"m", "k"};
        p.is_old = {false, false};
        p.ref_time = kRef;
        const RankedList bt2 = baseline_time(p, c2);
        CHECK(bt2.entries[0].id == "k");
    }
}

TEST_CASE("official rank preserves snapshot order over the filtered pool") {
    const Corpus corpus = tiny_corpus();
    const NewsPool pool = filter_known(build_pool(corpus.snapshots()[0], corpus, kRef), corpus);
    const RankedList off = official_rank(corpus.snapshots()[0], pool);
    REQUIRE(off.size() == 4);
    CHECK(off.entries[0].id == "b");
    CHECK(off.entries[1].id == "a");
    CHECK(off.entries[2].id == "d");
    CHECK(off.entries[3].id == "c");
}

TEST_CASE("ranking is stable under restriction") {
    const Corpus corpus = tiny_corpus();
    const NewsPool pool = filter_known(build_pool(corpus.snapshots()[0], corpus, kRef), corpus);
    const RankedList whole = ground_truth_rank(pool, corpus);
    NewsPool sub;
    sub.ref_time = pool.ref_time;
    for (std::size_t i = 0; i < pool.ids.size(); i += 2) {
        sub.ids.push_back(pool.ids[i]);
        sub.is_old.push_back(pool.is_old[i]);
    }
    const RankedList part = ground_truth_rank(sub, corpus);
    // order of the subset inside the whole ranking matches the subset ranking
    std::vector<std::string> filtered;
    for (const RankedEntry& e : whole.entries)
        if (std::find(sub.ids.begin(), sub.ids.end(), e.id) != sub.ids.end())
            filtered.push_back(e.id);
    std::vector<std::string> part_ids;
    for (const RankedEntry& e : part.entries) part_ids.push_back(e.id);
    CHECK(filtered == part_ids);
}

TEST_CASE("predicted rank: HYBRID interleaves observed and predicted scores") {
    // Train a linear model where y is about 100 per "kelova" occurrence.
    std::vector<NewsItem> train;
    for (int k = 0; k <= 5; ++k) {
        for (int copy = 0; copy < 4; ++copy) {
            NewsItem it;
            it.id = "t" + std::to_string(k) + "_" + std::to_string(copy);
            it.title = "training item";
            std::string h = "filler words beyond stop list";
            for (int i = 0; i < k; ++i) h += " kelova";
            it.headline = h;
            it.pub_ts = kRef - 10 * 86400 + k * 100 + copy;
            it.n_tweets_2d = 100 * k;
            train.push_back(it);
        }
    }
    const Vocabulary vocab = build_vocabulary(train, 20);
    REQUIRE(vocab.index_of("kelova") >= 0);
    const Dataset ds = featurize(train, vocab, Lexicon::builtin());
    const Model model = fit(LearnerSpec::linear(), ds);

    std::vector<NewsItem> items = train;
    auto add = [&](const std::string& id, Timestamp pub, std::optional<std::int64_t> count,
                   const std::string& headline) {
        NewsItem it;
        it.id = id;
        it.title = "x";
        it.headline = headline;
        it.pub_ts = pub;
        it.n_tweets_2d = count;
        items.push_back(it);
    };
    add("old_hi", kRef - 3 * 86400, 398, "kelova kelova kelova kelova kelova kelova");
    add("old_lo", kRef - 3 * 86400, 299, "filler filler");
    add("new_3", kRef - 3600, 123, "kelova kelova kelova filler");  // predicted ~300
    add("new_0", kRef - 7200, 456, "nothing special here");         // predicted ~0
    const Corpus corpus(std::move(items), {}, "t");

    NewsPool pool;
    pool.ref_time = kRef;
    pool.ids = {"old_hi", "old_lo", "new_3", "new_0"};
    pool.is_old = {true, true, false, false};

    const RankedList pr =
        predicted_rank(pool, corpus, model, PredictMode::HYBRID, Lexicon::builtin());
    REQUIRE(pr.size() == 4);
    // OLD items carry their observed counts exactly
    CHECK(pr.entries[0].id == "old_hi");
    CHECK(pr.entries[0].score == 398.0);
    // the high-signal NEW item predicts near 300, above the 299 OLD item
    CHECK(pr.entries[1].id == "new_3");
    CHECK(pr.entries[1].score == doctest::Approx(300.0).epsilon(0.05));
    CHECK(pr.entries[2].id == "old_lo");
    CHECK(pr.entries[2].score == 299.0);
    CHECK(pr.entries[3].id == "new_0");

    SUBCASE("NEW_ONLY ranks only the new items") {
        const RankedList nr =
            predicted_rank(pool, corpus, model, PredictMode::NEW_ONLY, Lexicon::builtin());
        REQUIRE(nr.size() == 2);
        CHECK(nr.entries[0].id == "new_3");
        CHECK(nr.entries[1].id == "new_0");
    }
    SUBCASE("NEW_ONLY with no new items is an error") {
        NewsPool all_old;
        all_old.ref_time = kRef;
        all_old.ids = {"old_hi", "old_lo"};
        all_old.is_old = {true, true};
        CHECK_THROWS_AS(
            predicted_rank(all_old, corpus, model, PredictMode::NEW_ONLY, Lexicon::builtin()),
            Error);
        // HYBRID over an all-OLD pool equals the observed ordering
        const RankedList hr =
            predicted_rank(all_old, corpus, model, PredictMode::HYBRID, Lexicon::builtin());
        CHECK(hr.entries[0].score == 398.0);
        CHECK(hr.entries[1].score == 299.0);
    }
}

TEST_CASE("rank csv export") {
    RankedList list;
    list.kind = RankKind::GROUND_TRUTH;
    list.entries = {{"a", 10.0}, {"b", 5.0}};
    std::ostringstream out;
    write_rank_csv(out, list);
    CHECK(out.str() == "rank,id,score,kind\n1,a,10,ground_truth\n2,b,5,ground_truth\n");
}
