/** API fixtures mirroring real service responses (field-for-field). */

import type { PairView, Prompt } from "../src/types.js";

export function longitudinalPrompt(overrides: Partial<Prompt> = {}): Prompt {
  return {
    prompt_id: "pb4a2d162c849162",
    originator_id: "u_dennis",
    target_id: "u_sarah",
    originator_handle: "dkray",
    target_handle: "sarahdev",
    kind: "longitudinal",
    message: "This person has tweeted you 4 times before- would you like to block them?",
    proposed_action: "block_account",
    event_id: "pa_0148",
    created_at: "2023-05-10T17:21:00Z",
    status: "pending",
    decided_at: null,
    indicators: {
      longitudinal: { prior_abusive_count: 4, triggered: true },
      informational: {
        originator_info_score: 0.4125,
        target_info_score: 1.0,
        target_share_pct: 70.79646017699115,
        triggered: false,
      },
      volumetric: {
        inbound_count: 1,
        baseline: 0.14285714285714285,
        directionality_pct: 100.0,
        triggered: false,
      },
      toxicity: 1.0,
    },
    ...overrides,
  };
}

export function volumetricPrompt(): Prompt {
  return longitudinalPrompt({
    prompt_id: "p512a7b9c0d1e2f3",
    kind: "volumetric",
    message:
      "You are receiving an unusual volume of tweets for your profile. " +
      "Would you like to delete all incoming tweets?",
    proposed_action: "delete_incoming",
    indicators: {
      longitudinal: { prior_abusive_count: 0, triggered: false },
      informational: {
        originator_info_score: 0.35,
        target_info_score: 1.0,
        target_share_pct: 74.07407407407408,
        triggered: false,
      },
      volumetric: {
        inbound_count: 10,
        baseline: 0.17261904761904762,
        directionality_pct: 100.0,
        triggered: true,
      },
      toxicity: 0.0,
    },
  });
}

export function pairFixture(): PairView {
  return {
    originator_id: "u_dennis",
    target_id: "u_sarah",
    originator_handle: "dkray",
    target_handle: "sarahdev",
    outbound_count: 3,
    inbound_count: 1,
    directionality_pct: 75.0,
    abusive_count: 3,
    events: [
      { event_id: "pa_0044", created_at: "2023-05-03T17:00:00Z", toxicity: 0.72, direction: "outbound" },
      { event_id: "pa_0050", created_at: "2023-05-04T09:10:00Z", toxicity: 0.0, direction: "inbound" },
      { event_id: "pa_0072", created_at: "2023-05-05T17:07:00Z", toxicity: 1.0, direction: "outbound" },
      { event_id: "pa_0099", created_at: "2023-05-07T17:14:00Z", toxicity: 0.8888888888888888, direction: "outbound" },
    ],
  };
}
