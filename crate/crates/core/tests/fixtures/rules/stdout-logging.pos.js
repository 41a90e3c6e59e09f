function load(url) {
  console.log('loading', url);
  return fetch(url).catch(function (e) {
    console.error(e);
  });
}
