/**
 * Browser entry: mount the table into a root element and bridge user clicks
 * to the session loop. Clicks while an action is pending are ignored (one
 * in-flight action); the server's idempotent turn tokens make an accidental
 * duplicate submission harmless anyway.
 */

import { ServiceClient } from "./api.js";
import type { TableViewModel, UIAction } from "./model.js";
import { render } from "./render.js";
import { mount, type DocumentLike, type ElementLike } from "./dom.js";
import { sessionLoop } from "./session.js";

export function start(
  doc: DocumentLike,
  root: ElementLike,
  serverUrl: string,
): Promise<void> {
  const client = new ServiceClient(serverUrl);
  let pendingResolve: ((action: UIAction) => void) | null = null;

  const dispatch = (action: UIAction): void => {
    if (pendingResolve) {
      const resolve = pendingResolve;
      pendingResolve = null; // one in-flight action; later clicks are ignored
      resolve(action);
    }
  };

  const draw = (model: TableViewModel): void => {
    mount(doc, root, render(model), dispatch);
  };

  return sessionLoop(client, {}, {
    onModel: draw,
    policy: (model) => {
      draw(model);
      return new Promise<UIAction>((resolve) => {
        pendingResolve = resolve;
      });
    },
  }).then(() => undefined);
}
