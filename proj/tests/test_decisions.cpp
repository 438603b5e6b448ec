#include "dqest/decisions.hpp"

#include <gtest/gtest.h>

using namespace dqest;

namespace {

const char* kTable =
    "worker_id,instance_id,f0,f1,decision,gt_known,true_label\n"
    "3,a,0.1,1.0,1,1,1\n"
    "3,b,0.2,2.0,0,0,\n"
    "7,c,0.3,3.0,1,0,0\n"
    "7,d,0.4,4.0,0,1,1\n";

}  // namespace

TEST(Decisions, ParsesWorkersInOrder) {
  const DecisionTable t = parse_decisions_csv(kTable);
  ASSERT_EQ(t.workers.size(), 2u);
  EXPECT_EQ(t.workers[0].id, 3);
  EXPECT_EQ(t.workers[1].id, 7);
  EXPECT_EQ(t.corpus.size(), 4);
  EXPECT_EQ(t.corpus.dim(), 2);
  EXPECT_DOUBLE_EQ(t.corpus.features(3, 1), 4.0);
  EXPECT_EQ(t.workers[0].t(), 1u);
  EXPECT_EQ(t.corpus.labels[1], kUnknownLabel);
  EXPECT_EQ(t.corpus.labels[2], 0);
  EXPECT_DOUBLE_EQ(realized_accuracy(t.corpus, {7, {t.workers[1].records[1]}}), 0.0);
}

TEST(Decisions, CustomFlagColumn) {
  const std::string text =
      "worker_id,instance_id,f0,decision,audited,true_label\n"
      "0,a,1,1,1,1\n"
      "1,b,2,0,0,\n";
  const DecisionTable t = parse_decisions_csv(text, "audited");
  EXPECT_EQ(t.workers[0].t(), 1u);
  EXPECT_THROW(parse_decisions_csv(text), ParseError);
}

TEST(Decisions, Errors) {
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n0,a,1,1,1\n"), ValidationError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n0,a,1,1,0\n1,a,2,0,0\n"),
               ValidationError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n0,a,1,2,0\n"), ValidationError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n0,a,x,1,0\n"), ParseError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n0,a,1,1\n"), ParseError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,decision,gt_known\n0,a,1,0\n"), ParseError);
  EXPECT_THROW(parse_decisions_csv("worker_id,instance_id,f0,decision,gt_known\n"), ValidationError);
}

TEST(Exclusive, AppendsHeldOutRows) {
  DecisionTable t = parse_decisions_csv(kTable);
  const GroundTruthPool pool = append_exclusive_csv(t, "instance_id,f0,f1,true_label\nx,9,9,1\ny,8,8,0\n");
  EXPECT_TRUE(pool.exclusive);
  ASSERT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.entries[0].instance, 4);
  EXPECT_EQ(pool.entries[1].label, 0);
  EXPECT_EQ(pool.entries[0].origin, kNoWorker);
  EXPECT_EQ(t.corpus.size(), 6);
  EXPECT_DOUBLE_EQ(t.corpus.features(5, 0), 8.0);
  EXPECT_DOUBLE_EQ(t.corpus.features(0, 1), 1.0);
}

TEST(Exclusive, Errors) {
  DecisionTable t = parse_decisions_csv(kTable);
  EXPECT_THROW(append_exclusive_csv(t, "instance_id,f0,f1,true_label\na,1,1,1\n"), ValidationError);
  EXPECT_THROW(append_exclusive_csv(t, "instance_id,f0,true_label\nx,1,1\n"), ValidationError);
  EXPECT_THROW(append_exclusive_csv(t, "instance_id,f0,f1,true_label\n"), ValidationError);
}
